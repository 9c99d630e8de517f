#include "kmseg/image.hpp"

#include "kmseg/error.hpp"

#include <algorithm>
#include <string>

namespace kmseg {

GrayImage::GrayImage(std::size_t width, std::size_t height, Pixel depth, Pixel fill)
    : GrayImage(width, height, depth, std::vector<Pixel>(width * height, fill))
{
}

GrayImage::GrayImage(std::size_t width, std::size_t height, Pixel depth, std::vector<Pixel> pixels)
    : width_(width), height_(height), depth_(depth), pixels_(std::move(pixels))
{
    if (depth_ != kDepth8 && depth_ != kDepth16)
        throw Error("unsupported image depth " + std::to_string(depth_) + " (expected 255 or 65535)");
    if ((width_ == 0) != (height_ == 0))
        throw Error("image dimensions must both be zero or both be positive");
    if (pixels_.size() != width_ * height_)
        throw Error("pixel count " + std::to_string(pixels_.size()) + " does not match "
                    + std::to_string(width_) + " x " + std::to_string(height_));
    auto over = std::find_if(pixels_.begin(), pixels_.end(), [&](Pixel p) { return p > depth_; });
    if (over != pixels_.end())
        throw Error("pixel value " + std::to_string(*over) + " exceeds depth " + std::to_string(depth_));
}

void GrayImage::set(std::size_t x, std::size_t y, Pixel value)
{
    if (value > depth_)
        throw Error("pixel value " + std::to_string(value) + " exceeds depth " + std::to_string(depth_));
    pixels_[y * width_ + x] = value;
}

Pixel depth_for(std::uint32_t max_value) noexcept
{
    return max_value <= kDepth8 ? kDepth8 : kDepth16;
}

} // namespace kmseg
