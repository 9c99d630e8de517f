// Serial reference vs OpenMP kernels on synthetic noisy images.

#include "kmseg/kmeans.hpp"
#include "kmseg/region_stats.hpp"
#include "kmseg/serial.hpp"
#include "kmseg/synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace kmseg;

namespace {

GrayImage bench_image(std::size_t side)
{
    SyntheticSpec spec{.width = side,
                       .height = side,
                       .regions = {{Rect{0, 0, side / 2, side}, 80},
                                   {Rect{side / 4, side / 4, side / 2, side / 2}, 160},
                                   {Rect{side / 8, side / 2, side / 4, side / 4}, 230}},
                       .noise_amplitude = 30,
                       .seed = 1};
    return make_synthetic(spec);
}

struct Fixture {
    GrayImage image;
    FlattenedIntensities fi;
    KMeansResult result;
    LabelMap labels;

    explicit Fixture(std::size_t side)
        : image(bench_image(side)), fi(flatten_and_shift(image)),
          result(kmeans_converge(build_histogram(fi), {.k = 5})),
          labels(segment(image, result.centroids, fi.shift))
    {
    }
};

void BM_HistogramSerial(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::build_histogram(f.fi));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.image.size()));
}

void BM_HistogramOmp(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_histogram(f.fi));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.image.size()));
}

void BM_SegmentSerial(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::segment(f.image, f.result.centroids, f.fi.shift));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.image.size()));
}

void BM_SegmentOmp(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(segment(f.image, f.result.centroids, f.fi.shift));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.image.size()));
}

void BM_RenderSerial(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::render_segmented(f.labels, f.result.centroids, f.fi.shift));
}

void BM_RenderOmp(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(render_segmented(f.labels, f.result.centroids, f.fi.shift));
}

void BM_MomentsSerial(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::pixel_moments(f.image, &f.labels, 1u));
}

void BM_MomentsOmp(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pixel_moments(f.image, &f.labels, 1u));
}

// Histogram k-means against the per-pixel oracle it replaces.
void BM_KMeansHistogram(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kmeans_converge(build_histogram(f.fi), {.k = 5}));
}

void BM_LloydOracleSerial(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::lloyd_oracle(f.fi, {.k = 5}));
}

void BM_LloydOracleOmp(benchmark::State& state)
{
    Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lloyd_oracle(f.fi, {.k = 5}));
}

} // namespace

BENCHMARK(BM_HistogramSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_HistogramOmp)->Arg(256)->Arg(1024);
BENCHMARK(BM_SegmentSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_SegmentOmp)->Arg(256)->Arg(1024);
BENCHMARK(BM_RenderSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_RenderOmp)->Arg(256)->Arg(1024);
BENCHMARK(BM_MomentsSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_MomentsOmp)->Arg(256)->Arg(1024);
BENCHMARK(BM_KMeansHistogram)->Arg(256)->Arg(1024);
BENCHMARK(BM_LloydOracleSerial)->Arg(256);
BENCHMARK(BM_LloydOracleOmp)->Arg(256);

BENCHMARK_MAIN();
