#pragma once

#include <cstdint>
#include <vector>

#include "poikit/geo.hpp"
#include "poikit/trajectory.hpp"

namespace poikit {

/// An extracted POI candidate: a centroid plus the radius covering every
/// member point, with the temporal footprint of the member fixes.
struct Cluster {
    int id = 0;
    LatLon centroid{};
    double radius_m = 0.0;              // max haversine distance centroid -> member
    std::vector<std::size_t> members;   // sorted indices into the source trajectory
    int visit_count = 1;
    std::int64_t first_seen = 0;
    std::int64_t last_seen = 0;
};

/// Max haversine distance from `center` to any member position.
double cluster_radius_m(const Trajectory& traj, const std::vector<std::size_t>& members,
                        const LatLon& center);

/// Assembles a cluster around an externally chosen centroid (members need not
/// average to it, e.g. partitioning cut off before convergence). Sorts the
/// member list and fills radius and the seen-time span.
Cluster make_cluster(const Trajectory& traj, std::vector<std::size_t> members,
                     const LatLon& center, int visit_count);

/// As above with the centroid taken as the member mean.
Cluster make_cluster(const Trajectory& traj, std::vector<std::size_t> members, int visit_count);

/// Number of temporally contiguous index runs in a sorted member list; used as
/// the visit count for the purely spatial algorithms.
int count_index_episodes(const std::vector<std::size_t>& sorted_members);

/// Sorts clusters by first member index and renumbers ids 0..n-1, so emission
/// order never depends on traversal order inside an algorithm.
void normalize_cluster_order(std::vector<Cluster>& clusters);

}  // namespace poikit
