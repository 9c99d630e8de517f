#include "kernel_common.hpp"

#include "kmseg/error.hpp"

#include <algorithm>
#include <string>

namespace kmseg::detail {

void check_segment_inputs(const GrayImage& image, const CentroidSet& centroids, std::int64_t shift)
{
    if (centroids.k() == 0) throw Error("k must be positive");
    if (image.empty()) throw Error("empty input");
    const Pixel lo = *std::ranges::min_element(image.pixels());
    if (std::int64_t{lo} - shift < 1)
        throw Error("shift mismatch: pixel " + std::to_string(lo) + " maps below level 1 under shift "
                    + std::to_string(shift));
}

void check_render_inputs(const LabelMap& labels, const CentroidSet& centroids, Pixel depth)
{
    if (centroids.k() == 0) throw Error("k must be positive");
    if (depth != kDepth8 && depth != kDepth16) throw Error("unsupported output depth " + std::to_string(depth));
    if (labels.labels.size() != labels.width * labels.height)
        throw Error("label map size does not match its dimensions");
    for (auto label : labels.labels)
        if (label >= centroids.k())
            throw Error("label " + std::to_string(label) + " out of range for k=" + std::to_string(centroids.k()));
}

void check_selection(const GrayImage& image, const LabelMap* mask, std::optional<std::uint32_t> region)
{
    if (region && mask == nullptr) throw Error("a region requires a mask");
    if (mask != nullptr && (mask->width != image.width() || mask->height != image.height()))
        throw Error("mask is " + std::to_string(mask->width) + " x " + std::to_string(mask->height) + " but image is "
                    + std::to_string(image.width()) + " x " + std::to_string(image.height()));
}

void check_oracle_inputs(const FlattenedIntensities& fi, const KMeansOptions& options)
{
    if (options.k == 0) throw Error("k must be positive");
    if (options.max_iters == 0) throw Error("max_iters must be positive");
    if (fi.values.empty()) throw Error("empty input");
}

} // namespace kmseg::detail
