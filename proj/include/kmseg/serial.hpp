#pragma once

// Single-threaded reference versions of the OpenMP kernels. The parallel
// entry points in kmeans.hpp and region_stats.hpp must match these exactly;
// tests and the benchmark compare the two.

#include "kmseg/kmeans.hpp"
#include "kmseg/region_stats.hpp"

namespace kmseg::serial {

IntensityHistogram build_histogram(const FlattenedIntensities& fi);

LabelMap segment(const GrayImage& image, const CentroidSet& centroids, std::int64_t shift);

GrayImage render_segmented(const LabelMap& labels, const CentroidSet& centroids, std::int64_t shift,
                           Pixel depth = kDepth8);

OracleResult lloyd_oracle(const FlattenedIntensities& fi, const KMeansOptions& options);

PixelMoments pixel_moments(const GrayImage& image, const LabelMap* mask, std::optional<std::uint32_t> region);

} // namespace kmseg::serial
