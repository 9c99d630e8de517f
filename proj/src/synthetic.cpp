#include "kmseg/synthetic.hpp"

#include "kmseg/error.hpp"

#include <algorithm>
#include <random>

namespace kmseg {

GrayImage make_synthetic(const SyntheticSpec& spec)
{
    if (spec.width == 0 || spec.height == 0) throw Error("synthetic image dimensions must be positive");
    GrayImage image(spec.width, spec.height, spec.depth, 0);

    for (std::size_t r = 0; r < spec.regions.size(); ++r) {
        const auto& [rect, intensity] = spec.regions[r];
        if (rect.width == 0 || rect.height == 0 || rect.x + rect.width > spec.width
            || rect.y + rect.height > spec.height)
            throw Error("region " + std::to_string(r) + " lies outside the " + std::to_string(spec.width) + " x "
                        + std::to_string(spec.height) + " image or is empty");
        if (intensity > spec.depth)
            throw Error("region " + std::to_string(r) + " intensity " + std::to_string(intensity)
                        + " exceeds depth " + std::to_string(spec.depth));
        for (std::size_t y = rect.y; y < rect.y + rect.height; ++y)
            for (std::size_t x = rect.x; x < rect.x + rect.width; ++x) image.set(x, y, intensity);
    }

    if (spec.noise_amplitude == 0) return image;

    std::mt19937_64 rng(spec.seed);
    const auto a = static_cast<long>(spec.noise_amplitude);
    std::uniform_int_distribution<long> noise(-a, a);
    for (std::size_t y = 0; y < spec.height; ++y)
        for (std::size_t x = 0; x < spec.width; ++x) {
            const long value = std::clamp(static_cast<long>(image.at(x, y)) + noise(rng), 0L,
                                          static_cast<long>(spec.depth));
            image.set(x, y, static_cast<Pixel>(value));
        }
    return image;
}

} // namespace kmseg
