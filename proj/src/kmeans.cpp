#include "kmseg/kmeans.hpp"

#include "kmseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kmseg {

namespace {

struct ClusterSums {
    std::vector<std::uint64_t> weight;    // sum h(a)
    std::vector<std::uint64_t> moment;    // sum a * h(a)
    std::vector<unsigned __int128> square; // sum a^2 * h(a)
};

ClusterSums accumulate(const IntensityHistogram& hist, const LevelAssignment& assignment, std::size_t k)
{
    ClusterSums sums{std::vector<std::uint64_t>(k, 0), std::vector<std::uint64_t>(k, 0),
                     std::vector<unsigned __int128>(k, 0)};
    const auto counts = hist.counts();
    for (Level a = 1; a < counts.size(); ++a) {
        if (counts[a] == 0) continue;
        const auto j = static_cast<std::size_t>(assignment[a]);
        sums.weight[j] += counts[a];
        sums.moment[j] += std::uint64_t{a} * counts[a];
        sums.square[j] += static_cast<unsigned __int128>(std::uint64_t{a} * a) * counts[a];
    }
    return sums;
}

// Dispersion of each non-empty cluster about its own mean,
// (N * Q - S^2) / N, with the numerator formed exactly.
double dispersion_about_means(const ClusterSums& sums)
{
    double total = 0.0;
    for (std::size_t j = 0; j < sums.weight.size(); ++j) {
        if (sums.weight[j] == 0) continue;
        const auto n = static_cast<unsigned __int128>(sums.weight[j]);
        const auto s = static_cast<unsigned __int128>(sums.moment[j]);
        const unsigned __int128 numerator = n * sums.square[j] - s * s;
        total += static_cast<double>(numerator) / static_cast<double>(sums.weight[j]);
    }
    return total;
}

void check_assignment_covers(const IntensityHistogram& hist, const LevelAssignment& assignment, std::size_t k)
{
    const auto counts = hist.counts();
    for (Level a = 1; a < counts.size(); ++a) {
        if (counts[a] == 0) continue;
        const auto j = assignment[a];
        if (j < 0 || static_cast<std::size_t>(j) >= k)
            throw Error("level " + std::to_string(a) + " has no valid cluster assignment");
    }
}

} // namespace

IntensityHistogram::IntensityHistogram(std::vector<std::uint64_t> counts) : counts_(std::move(counts))
{
    if (counts_.size() < 2 || counts_.back() == 0)
        throw Error("histogram must end at its maximum occupied level");
    if (counts_[0] != 0) throw Error("histogram level 0 must be empty");
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::size_t IntensityHistogram::distinct_levels() const noexcept
{
    return static_cast<std::size_t>(std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c != 0; }));
}

FlattenedIntensities flatten_and_shift(const GrayImage& image)
{
    if (image.empty()) throw Error("empty input");
    const auto pixels = image.pixels();
    const auto [lo, hi] = std::ranges::minmax(pixels);

    FlattenedIntensities fi;
    fi.shift = std::int64_t{lo} - 1;
    fi.max_level = static_cast<Level>(hi - fi.shift);
    fi.values.resize(pixels.size());
    std::ranges::transform(pixels, fi.values.begin(),
                           [shift = fi.shift](Pixel p) { return static_cast<Level>(p - shift); });
    return fi;
}

CentroidSet init_centroids(std::size_t k, Level m)
{
    if (k == 0) throw Error("k must be positive");
    if (m == 0) throw Error("maximum level must be positive");
    CentroidSet c;
    c.values.resize(k);
    c.exact.resize(k);
    const double denominator = static_cast<double>(k + 1);
    for (std::size_t j = 0; j < k; ++j) {
        c.values[j] = static_cast<double>(j + 1) * static_cast<double>(m) / denominator;
        c.exact[j] = ExactCentroid{(j + 1) * std::uint64_t{m}, k + 1};
    }
    return c;
}

std::size_t nearest_centroid(double level, const CentroidSet& centroids)
{
    if (centroids.has_exact() && level >= 0.0 && level <= 9.0e15 && std::floor(level) == level) {
        // |a - p/q| = |a*q - p| / q; cross-multiply to compare without rounding.
        const auto a = static_cast<__int128>(level);
        const auto gap = [a](const ExactCentroid& c) {
            const __int128 d = a * static_cast<__int128>(c.denominator) - static_cast<__int128>(c.numerator);
            return static_cast<unsigned __int128>(d < 0 ? -d : d);
        };
        std::size_t best = 0;
        for (std::size_t j = 1; j < centroids.k(); ++j) {
            const auto& cb = centroids.exact[best];
            const auto& cj = centroids.exact[j];
            if (gap(cj) * cb.denominator < gap(cb) * cj.denominator) best = j;
        }
        return best;
    }

    std::size_t best = 0;
    double best_distance = std::abs(level - centroids.values[0]);
    for (std::size_t j = 1; j < centroids.k(); ++j) {
        const double d = std::abs(level - centroids.values[j]);
        if (d < best_distance) {
            best = j;
            best_distance = d;
        }
    }
    return best;
}

LevelAssignment assign_levels(const IntensityHistogram& hist, const CentroidSet& centroids)
{
    if (centroids.k() == 0) throw Error("k must be positive");
    const auto counts = hist.counts();
    LevelAssignment out;
    out.cluster_of.assign(counts.size(), LevelAssignment::kUnassigned);
    for (Level a = 1; a < counts.size(); ++a)
        if (counts[a] != 0)
            out.cluster_of[a] = static_cast<std::int32_t>(nearest_centroid(a, centroids));
    return out;
}

CentroidSet update_centroids(const IntensityHistogram& hist, const LevelAssignment& assignment,
                             const CentroidSet& previous)
{
    const std::size_t k = previous.k();
    check_assignment_covers(hist, assignment, k);
    const ClusterSums sums = accumulate(hist, assignment, k);
    CentroidSet next = previous;
    const bool exact = previous.has_exact();
    for (std::size_t j = 0; j < k; ++j) {
        if (sums.weight[j] == 0) continue;
        next.values[j] = static_cast<double>(sums.moment[j]) / static_cast<double>(sums.weight[j]);
        if (exact) next.exact[j] = ExactCentroid{sums.moment[j], sums.weight[j]};
    }
    if (!exact) next.exact.clear();
    return next;
}

double within_cluster_dispersion(const IntensityHistogram& hist, const LevelAssignment& assignment,
                                 const CentroidSet& centroids)
{
    check_assignment_covers(hist, assignment, centroids.k());
    const auto counts = hist.counts();
    double total = 0.0;
    for (Level a = 1; a < counts.size(); ++a) {
        if (counts[a] == 0) continue;
        const double d = static_cast<double>(a) - centroids.values[static_cast<std::size_t>(assignment[a])];
        total += static_cast<double>(counts[a]) * d * d;
    }
    return total;
}

KMeansResult kmeans_converge(const IntensityHistogram& hist, const KMeansOptions& options)
{
    if (options.k == 0) throw Error("k must be positive");
    if (options.max_iters == 0) throw Error("max_iters must be positive");
    if (hist.total() == 0) throw Error("empty input");

    const std::size_t k = options.k;
    KMeansResult result;
    auto& report = result.report;
    if (k > hist.distinct_levels())
        report.warnings.push_back("k=" + std::to_string(k) + " exceeds the " + std::to_string(hist.distinct_levels())
                                  + " distinct intensity levels; surplus clusters stay empty");

    result.centroids = init_centroids(k, hist.max_level() + (options.m_plus_one ? 1 : 0));
    std::vector<bool> reported_empty(k, false);

    for (std::size_t pass = 1; pass <= options.max_iters; ++pass) {
        LevelAssignment assignment = assign_levels(hist, result.centroids);
        report.iterations = pass;
        if (pass > 1 && assignment == result.assignment) {
            // Nothing moved: centroids are already the means of this assignment.
            report.converged = true;
            report.dispersion_trace.push_back(report.dispersion_trace.back());
            break;
        }
        result.assignment = std::move(assignment);

        const ClusterSums sums = accumulate(hist, result.assignment, k);
        for (std::size_t j = 0; j < k; ++j) {
            if (sums.weight[j] != 0) {
                result.centroids.values[j] =
                    static_cast<double>(sums.moment[j]) / static_cast<double>(sums.weight[j]);
                result.centroids.exact[j] = ExactCentroid{sums.moment[j], sums.weight[j]};
            } else if (!reported_empty[j]) {
                reported_empty[j] = true;
                report.warnings.push_back("cluster " + std::to_string(j) + " empty at pass " + std::to_string(pass)
                                          + "; previous centroid retained");
            }
        }
        report.dispersion_trace.push_back(dispersion_about_means(sums));
    }
    return result;
}

} // namespace kmseg
