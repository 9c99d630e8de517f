#pragma once

// Histogram-based one-dimensional k-means over grayscale intensities.
//
// Intensities are min-shifted so the darkest pixel sits at level 1. Clustering
// then runs over the distinct levels of the histogram rather than over pixels:
// every pixel of one level always lands in the same cluster, so the result is
// identical to per-pixel Lloyd iteration but costs O(levels * k) per pass.

#include "kmseg/image.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kmseg {

using Level = std::uint32_t;

/// Row-major min-shifted intensities. Every value lies in [1, max_level];
/// original = value + shift.
struct FlattenedIntensities {
    std::vector<Level> values;
    Level max_level = 0;
    std::int64_t shift = 0;
};

/// Occurrence count per shifted level. Index 0 is never populated.
class IntensityHistogram {
public:
    IntensityHistogram() = default;
    /// `counts[a]` is the number of pixels at level a; counts[0] must be 0
    /// and the last entry must be non-zero.
    explicit IntensityHistogram(std::vector<std::uint64_t> counts);

    std::uint64_t count(Level a) const noexcept { return a < counts_.size() ? counts_[a] : 0; }
    Level max_level() const noexcept { return static_cast<Level>(counts_.empty() ? 0 : counts_.size() - 1); }
    std::uint64_t total() const noexcept { return total_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::size_t distinct_levels() const noexcept;

    friend bool operator==(const IntensityHistogram&, const IntensityHistogram&) = default;

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// A centroid as the exact ratio numerator / denominator.
struct ExactCentroid {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    friend bool operator==(const ExactCentroid&, const ExactCentroid&) = default;
};

/// Centroids in shifted level space. Centroids produced by init_centroids,
/// update_centroids and kmeans_converge also carry their exact rational form,
/// which nearest_centroid uses so that equidistant levels are true ties.
/// Hand-built sets may leave `exact` empty and compare in floating point.
struct CentroidSet {
    std::vector<double> values;
    std::vector<ExactCentroid> exact; // empty, or one per value

    std::size_t k() const noexcept { return values.size(); }
    bool has_exact() const noexcept { return !exact.empty() && exact.size() == values.size(); }
    friend bool operator==(const CentroidSet&, const CentroidSet&) = default;
};

/// Cluster index per shifted level; kUnassigned for levels absent from the
/// histogram.
struct LevelAssignment {
    static constexpr std::int32_t kUnassigned = -1;

    std::vector<std::int32_t> cluster_of;

    std::int32_t operator[](Level a) const noexcept
    {
        return a < cluster_of.size() ? cluster_of[a] : kUnassigned;
    }
    friend bool operator==(const LevelAssignment&, const LevelAssignment&) = default;
};

/// Per-pixel cluster index, row-major.
struct LabelMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint32_t> labels;

    friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

struct ConvergenceReport {
    std::size_t iterations = 0;
    bool converged = false;
    /// Within-cluster dispersion sum h(a) * (a - c)^2 after each pass.
    std::vector<double> dispersion_trace;
    std::vector<std::string> warnings;
};

struct KMeansOptions {
    std::size_t k = 5;
    std::size_t max_iters = 1000;
    /// Seed the initial centroids from max_level + 1 instead of max_level.
    bool m_plus_one = false;
};

struct KMeansResult {
    CentroidSet centroids;
    LevelAssignment assignment;
    ConvergenceReport report;
};

struct OracleResult {
    CentroidSet centroids;
    std::vector<std::uint32_t> labels;
    std::size_t iterations = 0;
    bool converged = false;
};

FlattenedIntensities flatten_and_shift(const GrayImage& image);

IntensityHistogram build_histogram(const FlattenedIntensities& fi);

/// Equally spaced seeds: the j-th (zero-based) centroid is (j + 1) * m / (k + 1).
CentroidSet init_centroids(std::size_t k, Level m);

/// Index of the centroid closest to `level` in absolute distance. Ties go to
/// the lowest index. Integral levels are compared exactly when the set
/// carries exact centroids.
std::size_t nearest_centroid(double level, const CentroidSet& centroids);

LevelAssignment assign_levels(const IntensityHistogram& hist, const CentroidSet& centroids);

/// Count-weighted mean level of each cluster. A cluster with no assigned
/// pixels keeps its previous value.
CentroidSet update_centroids(const IntensityHistogram& hist, const LevelAssignment& assignment,
                             const CentroidSet& previous);

/// Sum over occupied levels of h(a) * (a - c_assigned(a))^2.
double within_cluster_dispersion(const IntensityHistogram& hist, const LevelAssignment& assignment,
                                 const CentroidSet& centroids);

/// Alternates assignment and update from the equally spaced seeds until a
/// pass leaves every level in its cluster, or `max_iters` passes have run.
/// Running out of passes is reported through `converged`, not thrown.
KMeansResult kmeans_converge(const IntensityHistogram& hist, const KMeansOptions& options);

/// Labels every pixel with its nearest centroid after subtracting `shift`.
/// Throws if any pixel falls below level 1 under that shift.
LabelMap segment(const GrayImage& image, const CentroidSet& centroids, std::int64_t shift);

/// Paints each pixel with its cluster's centroid in original units, rounded
/// half up and clamped to [0, depth].
GrayImage render_segmented(const LabelMap& labels, const CentroidSet& centroids, std::int64_t shift,
                           Pixel depth = kDepth8);

/// Brute-force per-pixel Lloyd iteration with the same seeds and tie rule as
/// kmeans_converge. Reference implementation for testing.
OracleResult lloyd_oracle(const FlattenedIntensities& fi, const KMeansOptions& options);

} // namespace kmseg
