#include "poikit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <vector>

namespace poikit {

namespace {

// Urban box the scenarios play out in: ~10 km around a mid-latitude city
// center, matching the scale the clustering parameters are tuned for.
constexpr LatLon kCityCenter{46.52, 6.58};
constexpr double kBoxHalfExtentM = 5'000.0;
constexpr std::int64_t kStartEpoch = 1'519'862'400;  // 2018-03-01T00:00:00Z

constexpr double kPoiMinSeparationM = 500.0;
constexpr double kDecoyClearanceM = 300.0;
constexpr double kPausesPerLeg = 0.6;          // probability of a waypoint pause
constexpr double kPauseMinutesMin = 3.0;
constexpr double kPauseMinutesMax = 12.0;
constexpr int kMinVisitsPerPoi = 3;
constexpr int kPlacementAttempts = 10'000;

enum class PhaseKind { kDwell, kTravel, kPause };

struct Phase {
    PhaseKind kind = PhaseKind::kDwell;
    double start_s = 0.0;
    double end_s = 0.0;
    LatLon from{};
    LatLon to{};
    int poi = -1;  // dwell phases only
};

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
    double gaussian(double sigma) {
        return std::normal_distribution<double>(0.0, sigma)(engine);
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine() % n); }

    void shuffle(std::vector<int>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }
};

void validate_scenario(const SynthScenario& sc) {
    if (sc.n_users < 1 || sc.n_pois_per_user < 1 || sc.n_days < 1 || sc.sample_interval_s < 1) {
        throw std::invalid_argument("scenario counts must be positive");
    }
    const auto [dwell_min, dwell_max] = sc.dwell_minutes_range;
    if (!(dwell_min > 0.0) || dwell_min > dwell_max) {
        throw std::invalid_argument("bad dwell range");
    }
    if (dwell_max * 60.0 > 86'400.0) {
        throw std::invalid_argument("infeasible scenario (dwell exceeds one day)");
    }
    if (!(sc.travel_speed_kmh > 0.0)) {
        throw std::invalid_argument("travel speed must be positive");
    }
    if (sc.gps_noise_sigma_m < 0.0) {
        throw std::invalid_argument("noise sigma must be non-negative");
    }
    if (sc.decoy_fraction < 0.0 || sc.decoy_fraction >= 1.0) {
        throw std::invalid_argument("decoy_fraction must be in [0, 1)");
    }
}

LatLon offset_m(const LatLon& base, double north_m, double east_m) {
    return {base.lat + north_m / kMetersPerDegLat,
            base.lon + east_m / (kMetersPerDegLat *
                                 std::cos(base.lat * 3.14159265358979323846 / 180.0))};
}

LatLon random_in_box(Rng& rng) {
    const double north = rng.uniform(-kBoxHalfExtentM, kBoxHalfExtentM);
    const double east = rng.uniform(-kBoxHalfExtentM, kBoxHalfExtentM);
    return offset_m(kCityCenter, north, east);
}

LatLon lerp(const LatLon& a, const LatLon& b, double f) {
    return {a.lat + (b.lat - a.lat) * f, a.lon + (b.lon - a.lon) * f};
}

bool clear_of(const LatLon& p, const std::vector<LatLon>& spots, double min_dist_m) {
    return std::all_of(spots.begin(), spots.end(), [&](const LatLon& s) {
        return haversine_m(p, s) >= min_dist_m;
    });
}

std::string user_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "u%03d", index);
    return buf;
}

struct UserPlan {
    std::vector<LatLon> pois;
    std::vector<std::vector<LatLon>> waypoints;  // [i][j] for corridor i<j
    std::vector<Phase> phases;
};

UserPlan build_plan(const SynthScenario& sc, Rng& rng) {
    UserPlan plan;
    const int n_pois = sc.n_pois_per_user;

    for (int i = 0; i < n_pois; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
            const LatLon p = random_in_box(rng);
            if (clear_of(p, plan.pois, kPoiMinSeparationM)) {
                plan.pois.push_back(p);
                placed = true;
            }
        }
        if (!placed) {
            throw std::invalid_argument("infeasible scenario (cannot place separated POIs)");
        }
    }

    plan.waypoints.assign(static_cast<std::size_t>(n_pois), {});
    for (int i = 0; i < n_pois; ++i) {
        plan.waypoints[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n_pois), {});
        for (int j = i + 1; j < n_pois; ++j) {
            const double f = rng.uniform(0.35, 0.65);
            plan.waypoints[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                lerp(plan.pois[static_cast<std::size_t>(i)],
                     plan.pois[static_cast<std::size_t>(j)], f);
        }
    }

    const double total_s = static_cast<double>(sc.n_days) * 86'400.0;
    const double speed_ms = sc.travel_speed_kmh / 3.6;
    const auto [dwell_min, dwell_max] = sc.dwell_minutes_range;

    // Visit order comes from concatenated shuffled rounds over all POIs, so
    // visits stay balanced and no POI starves.
    std::vector<int> order;
    std::size_t order_pos = 0;
    int last_poi = -1;
    auto next_poi = [&]() {
        if (order_pos == order.size()) {
            order.resize(static_cast<std::size_t>(n_pois));
            for (int i = 0; i < n_pois; ++i) {
                order[static_cast<std::size_t>(i)] = i;
            }
            rng.shuffle(order);
            if (n_pois > 1 && order.front() == last_poi) {
                std::swap(order[0], order[1]);
            }
            order_pos = 0;
        }
        last_poi = order[order_pos++];
        return last_poi;
    };

    double t = 0.0;
    auto push = [&](PhaseKind kind, double duration_s, const LatLon& from, const LatLon& to,
                    int poi) {
        plan.phases.push_back({kind, t, t + duration_s, from, to, poi});
        t += duration_s;
    };
    auto dwell = [&](int poi) {
        const LatLon& p = plan.pois[static_cast<std::size_t>(poi)];
        push(PhaseKind::kDwell, rng.uniform(dwell_min, dwell_max) * 60.0, p, p, poi);
    };
    auto travel = [&](const LatLon& from, const LatLon& to) {
        push(PhaseKind::kTravel, haversine_m(from, to) / speed_ms, from, to, -1);
    };

    int current = next_poi();
    dwell(current);
    while (t < total_s) {
        const int next = next_poi();
        const LatLon& here = plan.pois[static_cast<std::size_t>(current)];
        if (next == current) {
            // Single-POI schedules still alternate: an out-and-back errand
            // keeps dwell episodes distinct without adding a stop.
            const double bearing = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            const double dist = rng.uniform(500.0, 2'000.0);
            const LatLon turnaround =
                offset_m(here, dist * std::cos(bearing), dist * std::sin(bearing));
            travel(here, turnaround);
            travel(turnaround, here);
        } else {
            const LatLon& there = plan.pois[static_cast<std::size_t>(next)];
            const auto [lo, hi] = std::minmax(current, next);
            const LatLon& wp =
                plan.waypoints[static_cast<std::size_t>(lo)][static_cast<std::size_t>(hi)];
            travel(here, wp);
            if (rng.uniform(0.0, 1.0) < kPausesPerLeg) {
                push(PhaseKind::kPause, rng.uniform(kPauseMinutesMin, kPauseMinutesMax) * 60.0,
                     wp, wp, -1);
            }
            travel(wp, there);
        }
        dwell(next);
        current = next;
    }

    std::vector<int> completed(static_cast<std::size_t>(n_pois), 0);
    for (const Phase& ph : plan.phases) {
        if (ph.kind == PhaseKind::kDwell && ph.end_s <= total_s) {
            ++completed[static_cast<std::size_t>(ph.poi)];
        }
    }
    for (int c : completed) {
        if (c < kMinVisitsPerPoi) {
            throw std::invalid_argument(
                "infeasible scenario (schedule cannot visit every POI 3 times)");
        }
    }
    return plan;
}

}  // namespace

SynthOutput generate(const SynthScenario& sc) {
    validate_scenario(sc);

    std::mt19937_64 master(sc.seed);
    std::vector<std::uint64_t> user_seeds(static_cast<std::size_t>(sc.n_users));
    for (auto& s : user_seeds) {
        s = master();
    }

    SynthOutput out;
    for (int u = 0; u < sc.n_users; ++u) {
        const std::string uid = user_name(u);
        Rng rng(user_seeds[static_cast<std::size_t>(u)]);
        const UserPlan plan = build_plan(sc, rng);
        const double total_s = static_cast<double>(sc.n_days) * 86'400.0;

        std::vector<TrajectoryPoint> fixes;
        fixes.reserve(static_cast<std::size_t>(total_s / sc.sample_interval_s) + 1);
        std::size_t phase_idx = 0;
        for (double t = 0.0; t < total_s; t += sc.sample_interval_s) {
            while (phase_idx + 1 < plan.phases.size() && t >= plan.phases[phase_idx].end_s) {
                ++phase_idx;
            }
            const Phase& ph = plan.phases[phase_idx];
            LatLon pos = ph.from;
            double speed_kmh = 0.0;
            if (ph.kind == PhaseKind::kTravel) {
                const double span = ph.end_s - ph.start_s;
                const double f = span > 0.0 ? std::clamp((t - ph.start_s) / span, 0.0, 1.0) : 1.0;
                pos = lerp(ph.from, ph.to, f);
                speed_kmh = sc.travel_speed_kmh;
            }
            if (sc.gps_noise_sigma_m > 0.0) {
                pos = offset_m(pos, rng.gaussian(sc.gps_noise_sigma_m),
                               rng.gaussian(sc.gps_noise_sigma_m));
            }
            TrajectoryPoint fix;
            fix.user_id = uid;
            fix.timestamp = kStartEpoch + static_cast<std::int64_t>(t);
            fix.lat = pos.lat;
            fix.lon = pos.lon;
            fix.speed = speed_kmh;
            fix.h_acc = sc.gps_noise_sigma_m;
            fixes.push_back(std::move(fix));
        }
        out.trajectories.emplace(uid, make_trajectory(uid, std::move(fixes)));

        // Ground truth: every true POI annotated yes, decoys annotated no and
        // kept clear of anywhere the schedule stops (POIs and pause waypoints)
        // so a decoy can never sit inside a legitimate cluster.
        std::vector<LatLon> stop_spots = plan.pois;
        for (int i = 0; i < sc.n_pois_per_user; ++i) {
            for (int j = i + 1; j < sc.n_pois_per_user; ++j) {
                stop_spots.push_back(
                    plan.waypoints[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            }
        }
        std::vector<GroundTruthPoint> gt;
        int gt_id = 0;
        for (const LatLon& poi : plan.pois) {
            GroundTruthPoint g;
            g.gt_id = gt_id++;
            g.lat = poi.lat;
            g.lon = poi.lon;
            g.validated = true;
            g.category = static_cast<Category>(rng.index(9));
            if (g.category == Category::kOther) {
                g.other_text = "unlabeled";
            }
            gt.push_back(std::move(g));
        }
        const double f = sc.decoy_fraction;
        const int n_decoys =
            static_cast<int>(std::llround(sc.n_pois_per_user * f / (1.0 - f)));
        for (int d = 0; d < n_decoys; ++d) {
            bool placed = false;
            for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
                const LatLon p = random_in_box(rng);
                if (clear_of(p, stop_spots, kDecoyClearanceM)) {
                    GroundTruthPoint g;
                    g.gt_id = gt_id++;
                    g.lat = p.lat;
                    g.lon = p.lon;
                    g.validated = false;
                    gt.push_back(std::move(g));
                    placed = true;
                }
            }
            if (!placed) {
                throw std::invalid_argument("infeasible scenario (cannot place decoys)");
            }
        }
        out.ground_truth.emplace(uid, std::move(gt));
        out.true_pois.emplace(uid, plan.pois);
    }
    return out;
}

}  // namespace poikit
