#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "poikit/cluster.hpp"
#include "poikit/trajectory.hpp"
#include "poikit/validation.hpp"

namespace poikit {

/// Malformed input data: bad headers, unparsable rows, schema violations.
/// Row-level messages always carry the 1-based line number ("row N: ...").
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// I/O failure (missing file, unwritable path); the message carries the path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One row of the cluster document; member indices are not persisted, only
/// the member count.
struct ClusterRecord {
    std::string user_id;
    int cluster_id = 0;
    double centroid_lat = 0.0;
    double centroid_lon = 0.0;
    double radius_m = 0.0;
    int visit_count = 0;
    std::int64_t first_seen = 0;
    std::int64_t last_seen = 0;
    std::int64_t member_count = 0;
};

std::vector<ClusterRef> cluster_refs(std::span<const ClusterRecord> records);

/// Trajectory CSV. Header (exact): user_id,timestamp,lat,lon,alt,speed,h_acc,v_acc
/// Optional columns may be empty. Ingestion is all-or-nothing: the first bad
/// row aborts the load with a ParseError naming the row.
std::map<std::string, Trajectory> read_trajectories(const std::filesystem::path& path);
void write_trajectories(const std::map<std::string, Trajectory>& trajectories,
                        const std::filesystem::path& path);

/// Ground-truth CSV. Header (exact): user_id,gt_id,lat,lon,validated,category,other_text
/// validated is parsed case-insensitively from {yes,no}; category must be one
/// of the nine known labels or empty; (user_id, gt_id) pairs must be unique.
std::map<std::string, std::vector<GroundTruthPoint>> read_ground_truth(
    const std::filesystem::path& path);
void write_ground_truth(const std::map<std::string, std::vector<GroundTruthPoint>>& gt,
                        const std::filesystem::path& path);

/// Cluster document: a JSON array of objects with exactly the keys user_id,
/// cluster_id, centroid_lat, centroid_lon, radius_m, visit_count, first_seen,
/// last_seen, member_count. Numbers round-trip losslessly.
void write_clusters(const std::map<std::string, std::vector<Cluster>>& clusters,
                    const std::filesystem::path& path);
std::map<std::string, std::vector<ClusterRecord>> read_clusters(
    const std::filesystem::path& path);

/// ROC CSV with header parameter_label,fpr,tpr, one row per point in sweep
/// grid order.
void write_roc(std::span<const RocPoint> points, const std::filesystem::path& path);
std::vector<RocPoint> read_roc(const std::filesystem::path& path);

}  // namespace poikit
