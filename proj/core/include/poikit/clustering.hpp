#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "poikit/cluster.hpp"
#include "poikit/trajectory.hpp"

namespace poikit {

struct KMeansParams {
    int k = 100;
    int max_iterations = 100;
    std::uint64_t seed = 1;
};

struct DbscanParams {
    double eps_deg = 0.001;  // neighborhood radius, degrees
    int min_pts = 30;
};

struct DjParams {
    double r_m = 60.0;             // candidate neighborhood radius, meters
    int min_pts = 20;
    double speed_threshold_kmh = 1.5;
};

struct DtParams {
    double d_m = 60.0;   // run radius, meters
    double t_s = 900.0;  // minimum run duration, seconds (strict >)
};

struct GtGenParams {
    double d_m = 60.0;
    double t_s = 900.0;
    int min_visits = 3;
};

/// Lloyd iterations over degree-space Euclidean distance, seeded uniform
/// choice of initial centroids among distinct positions. Effective k is
/// min(k, distinct positions); empty partitions are dropped, so fewer than k
/// clusters may come back. The final assignment maps every point to its
/// nearest surviving centroid.
std::vector<Cluster> kmeans(const Trajectory& traj, const KMeansParams& p);

/// As kmeans, also recording the within-cluster sum of squared degree
/// distances after every assignment pass.
std::vector<Cluster> kmeans_traced(const Trajectory& traj, const KMeansParams& p,
                                   std::vector<double>& sse_per_iteration);

/// Density clustering in degree space: core points have >= min_pts points
/// (themselves included) within eps_deg; clusters are maximal components of
/// density-connected core points; border points attach to the cluster of
/// their nearest core point (ties: lowest trajectory index); noise points are
/// dropped.
std::vector<Cluster> dbscan(const Trajectory& traj, const DbscanParams& p);

/// Density-joinable clustering: removes points moving faster than
/// speed_threshold_kmh relative to their predecessor, keeps density
/// neighborhoods of at least min_pts survivors within r_m, and transitively
/// merges candidate neighborhoods that share a point.
std::vector<Cluster> dj_cluster(const Trajectory& traj, const DjParams& p);

/// One pre-merge run of dt_cluster: a maximal sequence of consecutive fixes
/// each within d_m of the running centroid, kept when its time span strictly
/// exceeds t_s.
std::vector<Cluster> dt_candidates(const Trajectory& traj, const DtParams& p);

/// Duration-threshold clustering: dt_candidates runs whose centroids then
/// merge transitively while any two lie within d_m/3. visit_count is the
/// number of runs merged into a cluster.
std::vector<Cluster> dt_cluster(const Trajectory& traj, const DtParams& p);

/// Ground-truth candidate generation: dt_candidates runs merged while any two
/// clusters overlap (centroid distance <= sum of radii), then filtered to
/// those visited at least min_visits times.
std::vector<Cluster> generate_gt_candidates(const Trajectory& traj, const GtGenParams& p);

using AlgoParams = std::variant<KMeansParams, DbscanParams, DjParams, DtParams, GtGenParams>;

/// Runs whichever algorithm the parameter set selects.
std::vector<Cluster> run_algorithm(const Trajectory& traj, const AlgoParams& params);

/// Cluster count for one (trajectory, algorithm, parameters) cell.
std::size_t cluster_count(const Trajectory& traj, const AlgoParams& params);

/// "kmeans", "dbscan", "djcluster", "dtcluster" or "gtgen".
std::string algorithm_name(const AlgoParams& params);

}  // namespace poikit
