// OpenMP versions of the per-pixel kernels. All reductions are over exact
// integers, so results do not depend on the thread count or schedule.

#include "kmseg/kmeans.hpp"
#include "kmseg/region_stats.hpp"

#include "kernel_common.hpp"

#include <algorithm>
#include <cstddef>

namespace kmseg {

namespace {

// Above this many levels segment() labels pixels directly instead of through
// a per-level lookup table.
constexpr std::int64_t kMaxLookupLevels = std::int64_t{1} << 20;

using Index = std::ptrdiff_t;

} // namespace

IntensityHistogram build_histogram(const FlattenedIntensities& fi)
{
    const std::size_t levels = std::size_t{fi.max_level} + 1;
    std::vector<std::uint64_t> counts(levels, 0);
    const auto n = static_cast<Index>(fi.values.size());
    const Level* values = fi.values.data();

#pragma omp parallel
    {
        std::vector<std::uint64_t> local(levels, 0);
#pragma omp for schedule(static) nowait
        for (Index i = 0; i < n; ++i) ++local[values[i]];
#pragma omp critical(kmseg_histogram_merge)
        for (std::size_t a = 0; a < levels; ++a) counts[a] += local[a];
    }
    return IntensityHistogram(std::move(counts));
}

LabelMap segment(const GrayImage& image, const CentroidSet& centroids, std::int64_t shift)
{
    detail::check_segment_inputs(image, centroids, shift);
    LabelMap out{image.width(), image.height(), std::vector<std::uint32_t>(image.size())};
    const auto pixels = image.pixels();
    const auto n = static_cast<Index>(pixels.size());
    const std::int64_t top = std::int64_t{*std::ranges::max_element(pixels)} - shift;

    if (top > kMaxLookupLevels) {
#pragma omp parallel for schedule(static)
        for (Index i = 0; i < n; ++i)
            out.labels[i] =
                static_cast<std::uint32_t>(nearest_centroid(static_cast<double>(pixels[i] - shift), centroids));
        return out;
    }

    std::vector<std::uint32_t> lookup(static_cast<std::size_t>(top) + 1, 0);
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (Index a = 1; a <= top; ++a)
            lookup[a] = static_cast<std::uint32_t>(nearest_centroid(static_cast<double>(a), centroids));
#pragma omp for schedule(static)
        for (Index i = 0; i < n; ++i) out.labels[i] = lookup[pixels[i] - shift];
    }
    return out;
}

GrayImage render_segmented(const LabelMap& labels, const CentroidSet& centroids, std::int64_t shift, Pixel depth)
{
    detail::check_render_inputs(labels, centroids, depth);
    std::vector<Pixel> pixels(labels.labels.size());
    const auto n = static_cast<Index>(pixels.size());
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i)
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
    const auto n = static_cast<Index>(fi.values.size());
    const Level* values = fi.values.data();
    std::uint32_t* labels = result.labels.data();

    for (std::size_t pass = 1; pass <= options.max_iters; ++pass) {
        result.iterations = pass;
        std::size_t moved = 0;
#pragma omp parallel for schedule(static) reduction(+ : moved)
        for (Index i = 0; i < n; ++i) {
            const auto label = centroids.closest(values[i]);
            if (label != labels[i]) ++moved;
            labels[i] = label;
        }
        if (pass > 1 && moved == 0) {
            result.converged = true;
            break;
        }

        std::vector<std::uint64_t> sum(k, 0), count(k, 0);
#pragma omp parallel
        {
            std::vector<std::uint64_t> local_sum(k, 0), local_count(k, 0);
#pragma omp for schedule(static) nowait
            for (Index i = 0; i < n; ++i) {
                local_sum[labels[i]] += values[i];
                ++local_count[labels[i]];
            }
#pragma omp critical(kmseg_oracle_merge)
            for (std::size_t j = 0; j < k; ++j) {
                sum[j] += local_sum[j];
                count[j] += local_count[j];
            }
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
    PixelMoments total;
    const auto pixels = image.pixels();
    const auto n = static_cast<Index>(pixels.size());

#pragma omp parallel
    {
        PixelMoments local;
#pragma omp for schedule(static) nowait
        for (Index i = 0; i < n; ++i) {
            if (!detail::selected(mask, region, static_cast<std::size_t>(i))) continue;
            ++local.n;
            local.sum += pixels[i];
            local.sum_squares += std::uint64_t{pixels[i]} * pixels[i];
        }
#pragma omp critical(kmseg_moments_merge)
        {
            total.n += local.n;
            total.sum += local.sum;
            total.sum_squares += local.sum_squares;
        }
    }
    return total;
}

} // namespace kmseg
