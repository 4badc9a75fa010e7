#include <benchmark/benchmark.h>

#include <map>

#include "poikit/clustering.hpp"
#include "poikit/synth.hpp"

namespace {

// One synthetic user, sized in days (1440 fixes per day at the default
// interval). Generated once per size and cached across benchmark runs.
const poikit::Trajectory& trace_of_days(int days) {
    static std::map<int, poikit::Trajectory> cache;
    auto it = cache.find(days);
    if (it == cache.end()) {
        poikit::SynthScenario sc;
        sc.seed = 5;
        sc.n_users = 1;
        sc.n_pois_per_user = 8;
        sc.n_days = days;
        auto out = poikit::generate(sc);
        it = cache.emplace(days, std::move(out.trajectories.begin()->second)).first;
    }
    return it->second;
}

void BM_KMeans(benchmark::State& state) {
    const auto& traj = trace_of_days(3);
    const poikit::KMeansParams params{.k = static_cast<int>(state.range(0)),
                                      .max_iterations = 25,
                                      .seed = 1};
    for (auto _ : state) {
        auto clusters = poikit::kmeans(traj, params);
        benchmark::DoNotOptimize(clusters);
    }
}
BENCHMARK(BM_KMeans)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Dbscan(benchmark::State& state) {
    const auto& traj = trace_of_days(3);
    const poikit::DbscanParams params{.eps_deg = 0.0002, .min_pts = 30};
    for (auto _ : state) {
        auto clusters = poikit::dbscan(traj, params);
        benchmark::DoNotOptimize(clusters);
    }
}
BENCHMARK(BM_Dbscan)->Unit(benchmark::kMillisecond);

void BM_DjCluster(benchmark::State& state) {
    const auto& traj = trace_of_days(3);
    const poikit::DjParams params{.r_m = 60.0, .min_pts = 20, .speed_threshold_kmh = 1.5};
    for (auto _ : state) {
        auto clusters = poikit::dj_cluster(traj, params);
        benchmark::DoNotOptimize(clusters);
    }
}
BENCHMARK(BM_DjCluster)->Unit(benchmark::kMillisecond);

void BM_DtCluster(benchmark::State& state) {
    const auto& traj = trace_of_days(static_cast<int>(state.range(0)));
    const poikit::DtParams params{.d_m = 60.0, .t_s = 900.0};
    for (auto _ : state) {
        auto clusters = poikit::dt_cluster(traj, params);
        benchmark::DoNotOptimize(clusters);
    }
}
BENCHMARK(BM_DtCluster)->Arg(3)->Arg(7)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_GtCandidates(benchmark::State& state) {
    const auto& traj = trace_of_days(3);
    const poikit::GtGenParams params{};
    for (auto _ : state) {
        auto clusters = poikit::generate_gt_candidates(traj, params);
        benchmark::DoNotOptimize(clusters);
    }
}
BENCHMARK(BM_GtCandidates)->Unit(benchmark::kMillisecond);

}  // namespace
