#include "kmseg/error.hpp"
#include "kmseg/kmeans.hpp"
#include "kmseg/serial.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <set>

using namespace kmseg;
using kmseg::testing::brute_means;
using kmseg::testing::brute_nearest;
using kmseg::testing::random_image;

namespace {

IntensityHistogram hist_of(std::initializer_list<std::pair<Level, std::uint64_t>> entries)
{
    Level top = 0;
    for (auto [a, n] : entries) top = std::max(top, a);
    std::vector<std::uint64_t> counts(top + 1, 0);
    for (auto [a, n] : entries) counts[a] = n;
    return IntensityHistogram(std::move(counts));
}

GrayImage image_of(std::size_t w, std::size_t h, std::vector<Pixel> pixels)
{
    return GrayImage(w, h, kDepth8, std::move(pixels));
}

} // namespace

TEST_CASE("flatten_and_shift maps the minimum to level 1")
{
    auto fi = flatten_and_shift(image_of(3, 1, {5, 5, 5}));
    CHECK(fi.values == std::vector<Level>{1, 1, 1});
    CHECK(fi.max_level == 1);
    CHECK(fi.shift == 4);

    fi = flatten_and_shift(image_of(3, 1, {10, 20, 30}));
    CHECK(fi.values == std::vector<Level>{1, 11, 21});
    CHECK(fi.max_level == 21);
    CHECK(fi.shift == 9);

    fi = flatten_and_shift(image_of(2, 1, {0, 255}));
    CHECK(fi.values == std::vector<Level>{1, 256});
    CHECK(fi.max_level == 256);
    CHECK(fi.shift == -1);

    CHECK_THROWS_WITH_AS(flatten_and_shift(GrayImage{}), "empty input", Error);
}

TEST_CASE("build_histogram counts levels")
{
    FlattenedIntensities fi{{1, 1, 3}, 3, 0};
    auto h = build_histogram(fi);
    CHECK(h.count(1) == 2);
    CHECK(h.count(2) == 0);
    CHECK(h.count(3) == 1);
    CHECK(h.total() == 3);
    CHECK(h.count(4) == 0);

    h = build_histogram(FlattenedIntensities{{1}, 1, 0});
    CHECK(h.count(1) == 1);
    CHECK(h.total() == 1);

    h = build_histogram(FlattenedIntensities{{2, 2, 2, 2}, 2, 0});
    CHECK(h.count(2) == 4);
    CHECK(h.total() == 4);
    CHECK(h.distinct_levels() == 1);
}

TEST_CASE("init_centroids spaces seeds evenly")
{
    CHECK(init_centroids(1, 2).values == std::vector<double>{1.0});

    auto c = init_centroids(2, 10);
    CHECK(c.values[0] == doctest::Approx(10.0 / 3.0));
    CHECK(c.values[1] == doctest::Approx(20.0 / 3.0));

    c = init_centroids(5, 256);
    const std::vector<double> expected{42.667, 85.333, 128.0, 170.667, 213.333};
    REQUIRE(c.k() == 5);
    for (std::size_t j = 0; j < 5; ++j) CHECK(c.values[j] == doctest::Approx(expected[j]).epsilon(1e-5));

    CHECK_THROWS_WITH_AS(init_centroids(0, 10), "k must be positive", Error);
}

TEST_CASE("nearest_centroid uses absolute distance and lowest-index ties")
{
    const CentroidSet five{{42.667, 85.333, 128.0, 170.667, 213.333}};
    CHECK(nearest_centroid(100, five) == 1);
    CHECK(nearest_centroid(5, CentroidSet{{5.0}}) == 0);
    CHECK(nearest_centroid(6, CentroidSet{{4.0, 8.0}}) == 0);
    CHECK(nearest_centroid(6, CentroidSet{{8.0, 4.0}}) == 0);
    CHECK(nearest_centroid(7, CentroidSet{{4.0, 8.0}}) == 1);
}

TEST_CASE("assign_levels agrees with a brute-force distance scan")
{
    const auto h = hist_of({{1, 1}, {2, 1}, {9, 1}, {10, 1}});
    const std::vector<double> c{3.333, 6.667};
    const auto a = assign_levels(h, CentroidSet{c});
    for (Level level : {1u, 2u, 9u, 10u})
        CHECK(static_cast<std::size_t>(a[level]) == brute_nearest(level, c));
    CHECK(a[1] == 0);
    CHECK(a[2] == 0);
    CHECK(a[9] == 1);
    CHECK(a[10] == 1);
    for (Level level : {3u, 4u, 5u, 6u, 7u, 8u}) CHECK(a[level] == LevelAssignment::kUnassigned);

    CHECK(assign_levels(hist_of({{5, 4}}), CentroidSet{{5.0}})[5] == 0);

    const auto extremes = assign_levels(hist_of({{1, 1}, {256, 1}}), CentroidSet{{85.333, 170.667}});
    CHECK(extremes[1] == 0);
    CHECK(extremes[256] == 1);
}

TEST_CASE("update_centroids computes count-weighted means")
{
    auto h = hist_of({{10, 3}, {20, 1}});
    LevelAssignment a;
    a.cluster_of.assign(21, LevelAssignment::kUnassigned);
    a.cluster_of[10] = a.cluster_of[20] = 0;
    CHECK(update_centroids(h, a, CentroidSet{{1.0}}).values == std::vector<double>{12.5});

    h = hist_of({{1, 1}, {2, 1}, {9, 1}, {10, 1}});
    a.cluster_of.assign(11, LevelAssignment::kUnassigned);
    a.cluster_of[1] = a.cluster_of[2] = 0;
    a.cluster_of[9] = a.cluster_of[10] = 1;
    const auto next = update_centroids(h, a, CentroidSet{{3.333, 6.667}});
    const auto brute = brute_means({1, 2, 9, 10}, {0, 0, 1, 1}, {3.333, 6.667});
    CHECK(next.values == brute);
    CHECK(next.values == std::vector<double>{1.5, 9.5});

    h = hist_of({{7, 2}});
    a.cluster_of.assign(8, LevelAssignment::kUnassigned);
    a.cluster_of[7] = 0;
    CHECK(update_centroids(h, a, CentroidSet{{3.0, 100.0}}).values == std::vector<double>{7.0, 100.0});

    a.cluster_of[7] = LevelAssignment::kUnassigned;
    CHECK_THROWS_AS(update_centroids(h, a, CentroidSet{{3.0, 100.0}}), Error);
}

TEST_CASE("kmeans_converge hand-traced cases")
{
    SUBCASE("two pairs")
    {
        const auto r = kmeans_converge(hist_of({{1, 1}, {2, 1}, {9, 1}, {10, 1}}), {.k = 2});
        CHECK(r.centroids.values == std::vector<double>{1.5, 9.5});
        CHECK(r.assignment[1] == 0);
        CHECK(r.assignment[2] == 0);
        CHECK(r.assignment[9] == 1);
        CHECK(r.assignment[10] == 1);
        CHECK(r.report.converged);
        CHECK(r.report.iterations == 2);
        // Each pair sits 0.5 from its mean.
        CHECK(r.report.dispersion_trace == std::vector<double>{1.0, 1.0});
        CHECK(r.report.warnings.empty());
    }
    SUBCASE("single level")
    {
        const auto r = kmeans_converge(hist_of({{5, 100}}), {.k = 1});
        CHECK(r.centroids.values == std::vector<double>{5.0});
        CHECK(r.report.converged);
    }
    SUBCASE("bimodal image recovers both intensities")
    {
        std::vector<Pixel> pixels(40 * 30, 50);
        std::fill(pixels.begin() + 600, pixels.end(), 200);
        const auto fi = flatten_and_shift(image_of(40, 30, pixels));
        const auto r = kmeans_converge(build_histogram(fi), {.k = 2});
        REQUIRE(r.report.converged);
        CHECK(r.centroids.values == std::vector<double>{50.0 - fi.shift, 200.0 - fi.shift});
    }
    SUBCASE("surplus clusters stay empty with a warning")
    {
        const auto r = kmeans_converge(hist_of({{1, 3}, {4, 1}}), {.k = 4});
        CHECK(r.report.converged);
        CHECK_FALSE(r.report.warnings.empty());
        CHECK(r.report.warnings.front().find("exceeds") != std::string::npos);
        for (double c : r.centroids.values) CHECK(std::isfinite(c));
    }
    SUBCASE("iteration cap reports non-convergence")
    {
        const auto r = kmeans_converge(hist_of({{1, 1}, {2, 1}, {9, 1}, {10, 1}}), {.k = 2, .max_iters = 1});
        CHECK_FALSE(r.report.converged);
        CHECK(r.report.iterations == 1);
    }
    SUBCASE("invalid options")
    {
        CHECK_THROWS_AS(kmeans_converge(hist_of({{1, 1}}), {.k = 0}), Error);
        CHECK_THROWS_AS(kmeans_converge(hist_of({{1, 1}}), {.k = 1, .max_iters = 0}), Error);
    }
    SUBCASE("m_plus_one seeds from max + 1")
    {
        const auto h = hist_of({{1, 1}, {2, 1}, {9, 1}, {10, 1}});
        const auto r = kmeans_converge(h, {.k = 2, .m_plus_one = true});
        CHECK(r.centroids.values == std::vector<double>{1.5, 9.5});
    }
}

TEST_CASE("segment and render")
{
    const auto labels = segment(image_of(2, 2, {10, 10, 20, 20}), CentroidSet{{1.5, 11.5}}, 9);
    CHECK(labels.width == 2);
    CHECK(labels.height == 2);
    CHECK(labels.labels == std::vector<std::uint32_t>{0, 0, 1, 1});

    const auto constant = segment(image_of(3, 2, std::vector<Pixel>(6, 77)), CentroidSet{{1.0}}, 76);
    CHECK(constant.labels == std::vector<std::uint32_t>(6, 0));

    CHECK_THROWS_WITH_AS(segment(image_of(1, 1, {5}), CentroidSet{{1.0}}, 5), doctest::Contains("shift mismatch"),
                         Error);

    const auto rendered = render_segmented(LabelMap{2, 1, {0, 1}}, CentroidSet{{1.5, 9.5}}, 0);
    CHECK(std::vector<Pixel>(rendered.pixels().begin(), rendered.pixels().end()) == std::vector<Pixel>{2, 10});

    const auto clamped = render_segmented(LabelMap{2, 1, {0, 1}}, CentroidSet{{-3.0, 300.0}}, 0);
    CHECK(clamped.at(0, 0) == 0);
    CHECK(clamped.at(1, 0) == 255);

    CHECK_THROWS_AS(render_segmented(LabelMap{1, 1, {2}}, CentroidSet{{1.0, 2.0}}, 0), Error);
}

TEST_CASE("segment labels agree with the level assignment")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto image = random_image(rng, 24);
        const auto fi = flatten_and_shift(image);
        const auto r = kmeans_converge(build_histogram(fi), {.k = 1 + static_cast<std::size_t>(trial % 6)});
        REQUIRE(r.report.converged);
        const auto labels = segment(image, r.centroids, fi.shift);
        for (std::size_t i = 0; i < fi.values.size(); ++i)
            REQUIRE(static_cast<std::int32_t>(labels.labels[i]) == r.assignment[fi.values[i]]);
    }
}

TEST_CASE("lloyd_oracle examples")
{
    const FlattenedIntensities pairs{{1, 2, 9, 10}, 10, 0};
    const auto o = lloyd_oracle(pairs, {.k = 2});
    CHECK(o.centroids.values == std::vector<double>{1.5, 9.5});
    CHECK(o.labels == std::vector<std::uint32_t>{0, 0, 1, 1});
    CHECK(o.converged);
    CHECK(o.iterations == 2);

    const auto single = lloyd_oracle(FlattenedIntensities{{1}, 1, 41}, {.k = 1});
    CHECK(single.centroids.values == std::vector<double>{1.0});
}

TEST_CASE("properties over random images")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto image = random_image(rng, 32);
        const std::size_t k = 1 + static_cast<std::size_t>(rng() % 6);
        const KMeansOptions options{.k = k, .m_plus_one = trial % 5 == 0};
        CAPTURE(trial);
        CAPTURE(k);

        const auto fi = flatten_and_shift(image);
        const auto hist = build_histogram(fi);
        const auto r = kmeans_converge(hist, options);
        const auto o = lloyd_oracle(fi, options);

        // Oracle equivalence.
        REQUIRE(o.converged == r.report.converged);
        REQUIRE(o.iterations == r.report.iterations);
        for (std::size_t j = 0; j < k; ++j) REQUIRE(std::abs(o.centroids.values[j] - r.centroids.values[j]) <= 1e-9);
        for (std::size_t i = 0; i < fi.values.size(); ++i)
            REQUIRE(static_cast<std::int32_t>(o.labels[i]) == r.assignment[fi.values[i]]);

        // Termination: a converged run is a fixed point.
        REQUIRE(r.report.converged);
        REQUIRE(assign_levels(hist, r.centroids) == r.assignment);

        // Dispersion is non-increasing and matches the direct sum.
        const auto& trace = r.report.dispersion_trace;
        REQUIRE(trace.size() == r.report.iterations);
        for (std::size_t t = 1; t < trace.size(); ++t) REQUIRE(trace[t] <= trace[t - 1]);
        const double direct = within_cluster_dispersion(hist, r.assignment, r.centroids);
        REQUIRE(trace.back() == doctest::Approx(direct).epsilon(1e-9));

        // Centroid of a non-empty cluster lies within its assigned levels.
        std::vector<Level> lo(k, std::numeric_limits<Level>::max()), hi(k, 0);
        for (Level a = 1; a <= hist.max_level(); ++a) {
            if (hist.count(a) == 0) continue;
            const auto j = static_cast<std::size_t>(r.assignment[a]);
            lo[j] = std::min(lo[j], a);
            hi[j] = std::max(hi[j], a);
        }
        for (std::size_t j = 0; j < k; ++j) {
            REQUIRE(std::isfinite(r.centroids.values[j]));
            if (hi[j] == 0) continue;
            REQUIRE(r.centroids.values[j] >= lo[j]);
            REQUIRE(r.centroids.values[j] <= hi[j]);
        }

        // Seeds: gap m/(k+1), strictly inside (0, m+1).
        const Level m = hist.max_level() + (options.m_plus_one ? 1 : 0);
        const auto seeds = init_centroids(k, m);
        for (std::size_t j = 0; j < k; ++j) {
            REQUIRE(seeds.values[j] > 0.0);
            REQUIRE(seeds.values[j] < m + 1.0);
            if (j > 0)
                REQUIRE(seeds.values[j] - seeds.values[j - 1]
                        == doctest::Approx(static_cast<double>(m) / (k + 1)).epsilon(1e-12));
        }

        // Label completeness.
        const auto labels = segment(image, r.centroids, fi.shift);
        REQUIRE(labels.labels.size() == image.size());
        for (auto l : labels.labels) REQUIRE(l < k);

        // Determinism.
        const auto again = kmeans_converge(build_histogram(flatten_and_shift(image)), options);
        REQUIRE(again.centroids == r.centroids);
        REQUIRE(again.report.dispersion_trace == r.report.dispersion_trace);
    }
}

TEST_CASE("exact recovery when seeds separate the distinct levels")
{
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int trial = 0; trial < 2000 && checked < 200; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(rng() % 6);
        std::set<Pixel> distinct;
        while (distinct.size() < k) distinct.insert(static_cast<Pixel>(rng() % 256));
        const std::vector<Pixel> levels(distinct.begin(), distinct.end());
        const std::int64_t shift = std::int64_t{levels.front()} - 1;
        const auto seeds = init_centroids(k, static_cast<Level>(levels.back() - shift)).values;

        std::set<std::size_t> owners;
        for (Pixel p : levels) owners.insert(brute_nearest(static_cast<double>(p - shift), seeds));
        if (owners.size() != k) continue;

        std::vector<Pixel> pixels;
        for (Pixel p : levels) pixels.insert(pixels.end(), 1 + rng() % 20, p);
        const auto fi = flatten_and_shift(GrayImage(pixels.size(), 1, kDepth8, pixels));
        const auto r = kmeans_converge(build_histogram(fi), {.k = k});
        REQUIRE(r.report.converged);
        for (std::size_t j = 0; j < k; ++j)
            REQUIRE(r.centroids.values[j] == static_cast<double>(levels[j] - shift));
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("equidistant levels are exact ties")
{
    // Seeds 2/3 and 4/3: level 1 is exactly 1/3 from both.
    const auto seeds = init_centroids(2, 2);
    CHECK(seeds.has_exact());
    CHECK(nearest_centroid(1, seeds) == 0);
    CHECK(nearest_centroid(2, seeds) == 1);

    const auto r = kmeans_converge(hist_of({{1, 7}, {2, 3}}), {.k = 2});
    CHECK(r.centroids.values == std::vector<double>{1.0, 2.0});
    CHECK(r.centroids.exact == std::vector<ExactCentroid>{{7, 7}, {6, 3}}); // unreduced sum / count

    // k=5 over m=3: seeds at 0.5, 1, 1.5, 2, 2.5, so levels tie between seeds.
    const auto five = init_centroids(5, 3);
    CHECK(nearest_centroid(1, five) == 1);
    CHECK(nearest_centroid(3, five) == 4);
}

TEST_CASE("hand-built centroid sets compare in floating point")
{
    const CentroidSet loose{{3.333, 6.667}};
    CHECK_FALSE(loose.has_exact());
    const auto h = hist_of({{1, 1}, {2, 1}, {9, 1}, {10, 1}});
    const auto next = update_centroids(h, assign_levels(h, loose), loose);
    CHECK_FALSE(next.has_exact());

    const auto seeded = update_centroids(h, assign_levels(h, init_centroids(2, 10)), init_centroids(2, 10));
    CHECK(seeded.exact == std::vector<ExactCentroid>{{3, 2}, {19, 2}});
}
