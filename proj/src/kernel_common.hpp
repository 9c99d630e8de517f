#pragma once

// Validation and per-element helpers shared by the serial and OpenMP kernels.
// Everything that can throw runs before a parallel region starts.

#include "kmseg/kmeans.hpp"
#include "kmseg/region_stats.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

namespace kmseg::detail {

void check_segment_inputs(const GrayImage& image, const CentroidSet& centroids, std::int64_t shift);

void check_render_inputs(const LabelMap& labels, const CentroidSet& centroids, Pixel depth);

void check_selection(const GrayImage& image, const LabelMap* mask, std::optional<std::uint32_t> region);

void check_oracle_inputs(const FlattenedIntensities& fi, const KMeansOptions& options);

inline Pixel render_value(double centroid, std::int64_t shift, Pixel depth) noexcept
{
    const double value = std::floor(centroid + static_cast<double>(shift) + 0.5);
    if (!(value > 0.0)) return 0;
    if (value >= static_cast<double>(depth)) return depth;
    return static_cast<Pixel>(value);
}

inline bool selected(const LabelMap* mask, std::optional<std::uint32_t> region, std::size_t i) noexcept
{
    return !region || mask->labels[i] == *region;
}

// The oracle keeps its own centroid state and distance scan rather than
// calling nearest_centroid, so it stays an independent check of the main path.
// Centroid j is sum[j] / count[j], compared exactly by cross-multiplication.
struct OracleCentroids {
    std::vector<std::uint64_t> sum;
    std::vector<std::uint64_t> count;

    std::uint32_t closest(Level level) const noexcept
    {
        const auto distance = [&](std::size_t j) {
            const __int128 d = static_cast<__int128>(level) * count[j] - static_cast<__int128>(sum[j]);
            return static_cast<unsigned __int128>(d < 0 ? -d : d);
        };
        std::uint32_t best = 0;
        for (std::uint32_t j = 1; j < sum.size(); ++j)
            if (distance(j) * count[best] < distance(best) * count[j]) best = j;
        return best;
    }

    CentroidSet to_set() const
    {
        CentroidSet out;
        for (std::size_t j = 0; j < sum.size(); ++j) {
            out.values.push_back(static_cast<double>(sum[j]) / static_cast<double>(count[j]));
            out.exact.push_back(ExactCentroid{sum[j], count[j]});
        }
        return out;
    }
};

inline OracleCentroids oracle_seeds(const FlattenedIntensities& fi, const KMeansOptions& options)
{
    const std::uint64_t m = std::uint64_t{fi.max_level} + (options.m_plus_one ? 1 : 0);
    OracleCentroids seeds;
    for (std::size_t j = 0; j < options.k; ++j) {
        seeds.sum.push_back((j + 1) * m);
        seeds.count.push_back(options.k + 1);
    }
    return seeds;
}

} // namespace kmseg::detail
