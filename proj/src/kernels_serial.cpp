#include "kmseg/serial.hpp"

#include "kernel_common.hpp"

#include <algorithm>

namespace kmseg::serial {

IntensityHistogram build_histogram(const FlattenedIntensities& fi)
{
    std::vector<std::uint64_t> counts(std::size_t{fi.max_level} + 1, 0);
    for (Level v : fi.values) ++counts[v];
    return IntensityHistogram(std::move(counts));
}

LabelMap segment(const GrayImage& image, const CentroidSet& centroids, std::int64_t shift)
{
    detail::check_segment_inputs(image, centroids, shift);
    LabelMap out{image.width(), image.height(), std::vector<std::uint32_t>(image.size())};
    const auto pixels = image.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i)
        out.labels[i] =
            static_cast<std::uint32_t>(nearest_centroid(static_cast<double>(pixels[i] - shift), centroids));
    return out;
}

GrayImage render_segmented(const LabelMap& labels, const CentroidSet& centroids, std::int64_t shift, Pixel depth)
{
    detail::check_render_inputs(labels, centroids, depth);
    std::vector<Pixel> pixels(labels.labels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = detail::render_value(centroids.values[labels.labels[i]], shift, depth);
    return GrayImage(labels.width, labels.height, depth, std::move(pixels));
}

OracleResult lloyd_oracle(const FlattenedIntensities& fi, const KMeansOptions& options)
{
    detail::check_oracle_inputs(fi, options);
    const std::size_t k = options.k;
    OracleResult result;
    detail::OracleCentroids centroids = detail::oracle_seeds(fi, options);
    result.labels.assign(fi.values.size(), 0);

    for (std::size_t pass = 1; pass <= options.max_iters; ++pass) {
        result.iterations = pass;
        std::size_t moved = 0;
        for (std::size_t i = 0; i < fi.values.size(); ++i) {
            const auto label = centroids.closest(fi.values[i]);
            if (label != result.labels[i]) ++moved;
            result.labels[i] = label;
        }
        if (pass > 1 && moved == 0) {
            result.converged = true;
            break;
        }
        std::vector<std::uint64_t> sum(k, 0), count(k, 0);
        for (std::size_t i = 0; i < fi.values.size(); ++i) {
            sum[result.labels[i]] += fi.values[i];
            ++count[result.labels[i]];
        }
        for (std::size_t j = 0; j < k; ++j)
            if (count[j] != 0) {
                centroids.sum[j] = sum[j];
                centroids.count[j] = count[j];
            }
    }
    result.centroids = centroids.to_set();
    return result;
}

PixelMoments pixel_moments(const GrayImage& image, const LabelMap* mask, std::optional<std::uint32_t> region)
{
    detail::check_selection(image, mask, region);
    PixelMoments m;
    const auto pixels = image.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (!detail::selected(mask, region, i)) continue;
        ++m.n;
        m.sum += pixels[i];
        m.sum_squares += std::uint64_t{pixels[i]} * pixels[i];
    }
    return m;
}

} // namespace kmseg::serial
