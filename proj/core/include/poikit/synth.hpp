#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "poikit/geo.hpp"
#include "poikit/trajectory.hpp"
#include "poikit/validation.hpp"

namespace poikit {

/// Seeded scenario for the synthetic mobility generator. Each user gets
/// n_pois_per_user dwell locations inside a ~10 km urban box and a schedule
/// that alternates dwells with constant-speed transitions; brief waypoint
/// pauses (shorter than any duration threshold) punctuate the transitions so
/// the traces carry short-stop structure as well.
struct SynthScenario {
    std::uint64_t seed = 42;
    int n_users = 5;
    int n_pois_per_user = 8;
    int n_days = 14;
    int sample_interval_s = 60;
    std::pair<double, double> dwell_minutes_range = {20.0, 120.0};
    double travel_speed_kmh = 20.0;
    double gps_noise_sigma_m = 12.0;  // median horizontal accuracy of phone GPS
    double decoy_fraction = 0.5;      // fraction of ground-truth points annotated "no"
};

struct SynthOutput {
    std::map<std::string, Trajectory> trajectories;
    std::map<std::string, std::vector<GroundTruthPoint>> ground_truth;
    std::map<std::string, std::vector<LatLon>> true_pois;
};

/// Deterministic in the scenario seed. Guarantees every true POI at least
/// three dwell visits, annotates every true POI "yes" and places decoy "no"
/// points well clear (>= 300 m) of anywhere the schedule stops. Throws
/// std::invalid_argument("infeasible scenario...") when the schedule cannot
/// satisfy those guarantees.
SynthOutput generate(const SynthScenario& scenario);

}  // namespace poikit
