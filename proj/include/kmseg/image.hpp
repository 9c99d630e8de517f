#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kmseg {

using Pixel = std::uint16_t;

inline constexpr Pixel kDepth8 = 255;
inline constexpr Pixel kDepth16 = 65535;

/// Rectangular grayscale raster, row-major. `depth` is the largest
/// representable intensity: 255 for 8-bit data, 65535 for 16-bit data.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, Pixel depth = kDepth8, Pixel fill = 0);
    GrayImage(std::size_t width, std::size_t height, Pixel depth, std::vector<Pixel> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }
    Pixel depth() const noexcept { return depth_; }

    Pixel at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
    void set(std::size_t x, std::size_t y, Pixel value);

    std::span<const Pixel> pixels() const noexcept { return pixels_; }
    std::span<const Pixel> row(std::size_t y) const
    {
        return std::span<const Pixel>(pixels_).subspan(y * width_, width_);
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    Pixel depth_ = kDepth8;
    std::vector<Pixel> pixels_;
};

/// Smallest standard depth able to hold `max_value`.
Pixel depth_for(std::uint32_t max_value) noexcept;

} // namespace kmseg
