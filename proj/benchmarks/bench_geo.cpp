#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "poikit/geo.hpp"

namespace {

std::vector<poikit::LatLon> sample_points(std::size_t n) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lat(46.4, 46.6);
    std::uniform_real_distribution<double> lon(6.5, 6.7);
    std::vector<poikit::LatLon> pts(n);
    for (auto& p : pts) {
        p = {lat(rng), lon(rng)};
    }
    return pts;
}

void BM_Haversine(benchmark::State& state) {
    const auto pts = sample_points(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const double d = poikit::haversine_m(pts[i % 1024], pts[(i + 7) % 1024]);
        benchmark::DoNotOptimize(d);
        ++i;
    }
}
BENCHMARK(BM_Haversine);

void BM_EuclideanDeg(benchmark::State& state) {
    const auto pts = sample_points(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const double d = poikit::euclidean_deg(pts[i % 1024], pts[(i + 7) % 1024]);
        benchmark::DoNotOptimize(d);
        ++i;
    }
}
BENCHMARK(BM_EuclideanDeg);

void BM_Centroid(benchmark::State& state) {
    const auto pts = sample_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const poikit::LatLon c = poikit::centroid(pts);
        benchmark::DoNotOptimize(c);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Centroid)->Range(64, 16384)->Complexity(benchmark::oN);

}  // namespace
