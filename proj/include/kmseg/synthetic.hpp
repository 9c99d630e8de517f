#pragma once

#include "kmseg/image.hpp"

#include <cstdint>
#include <vector>

namespace kmseg {

struct Rect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t width = 0;
    std::size_t height = 0;

    bool contains(std::size_t px, std::size_t py) const noexcept
    {
        return px >= x && px < x + width && py >= y && py < y + height;
    }
};

struct SyntheticRegion {
    Rect rect;
    Pixel intensity = 0;
};

struct SyntheticSpec {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<SyntheticRegion> regions;
    /// Uniform integer noise in [-amplitude, +amplitude] added to every pixel.
    unsigned noise_amplitude = 0;
    std::uint64_t seed = 0;
    Pixel depth = kDepth8;
};

/// Background 0 with each region painted in order (later regions win where
/// they overlap), then seeded noise clamped to [0, depth].
GrayImage make_synthetic(const SyntheticSpec& spec);

} // namespace kmseg
