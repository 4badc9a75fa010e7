#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poikit/cluster.hpp"
#include "poikit/clustering.hpp"
#include "poikit/geo.hpp"
#include "poikit/trajectory.hpp"

namespace poikit {

/// Closed vocabulary of semantic labels for annotated places.
enum class Category {
    kTransport,
    kStudy,
    kResidency,
    kWork,
    kSustenance,
    kShopping,
    kSports,
    kLeisure,
    kOther,
};

/// Case-insensitive parse; nullopt for unknown tokens.
std::optional<Category> parse_category(std::string_view token);
std::string_view category_name(Category c);

/// An annotated location with the participant's yes/no validation.
/// other_text is only meaningful when category == kOther.
struct GroundTruthPoint {
    int gt_id = 0;
    double lat = 0.0;
    double lon = 0.0;
    bool validated = false;
    std::optional<Category> category;
    std::string other_text;

    LatLon position() const { return {lat, lon}; }
};

/// The nearest extracted cluster for one ground-truth point. cluster_id is
/// absent when no clusters exist; both distances are +infinity in that case.
/// distance_deg ranks candidates (degree-space Euclidean); distance_m is the
/// haversine distance to the chosen centroid, used by the validation zone.
struct GtLink {
    int gt_id = 0;
    std::optional<int> cluster_id;
    double distance_deg = 0.0;
    double distance_m = 0.0;
};

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o);
};

struct RocRates {
    double tpr = 0.0;
    double fpr = 0.0;
    // False when the corresponding denominator was zero and the rate was
    // substituted with 0.
    bool tpr_defined = true;
    bool fpr_defined = true;
};

struct RocPoint {
    std::string parameter_label;
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Identity + centroid, the only cluster data linking needs. Lets callers
/// link against clusters loaded from a document as well as freshly extracted
/// ones.
struct ClusterRef {
    int id = 0;
    LatLon centroid{};
};

std::vector<ClusterRef> cluster_refs(std::span<const Cluster> clusters);

/// Links every ground-truth point to the cluster with the smallest
/// degree-space Euclidean distance (ties: lowest cluster id). Throws
/// std::invalid_argument("no ground truth") on an empty gt list.
std::vector<GtLink> link_ground_truth(std::span<const GroundTruthPoint> gt,
                                      std::span<const ClusterRef> clusters);
std::vector<GtLink> link_ground_truth(std::span<const GroundTruthPoint> gt,
                                      std::span<const Cluster> clusters);

/// Confusion counts with validation-zone radius d_m (meters): a link passes
/// the distance validation when its haversine distance is <= d_m. links and
/// gt must be index-aligned by gt_id or std::invalid_argument("link/gt
/// mismatch") is thrown.
ConfusionCounts classify(std::span<const GtLink> links,
                         std::span<const GroundTruthPoint> gt, double d_m);

/// tpr = tp/(tp+fn), fpr = fp/(fp+tn); a zero denominator yields rate 0 with
/// the corresponding *_defined flag cleared.
RocRates roc_rates(const ConfusionCounts& c);

/// One sweep grid cell: a parameter set plus its display label ("k=30", ...).
struct SweepCell {
    std::string label;
    AlgoParams params;
};

/// Runs every cell over every user, micro-averages the confusion counts
/// (summed across users) and emits one RocPoint per cell in grid order.
/// Errors from clustering or linking are rethrown annotated with the cell
/// label and user id. When counts_out is non-null it receives the aggregated
/// counts per cell, index-aligned with the result.
std::vector<RocPoint> sweep(const std::map<std::string, Trajectory>& trajectories,
                            const std::map<std::string, std::vector<GroundTruthPoint>>& ground_truth,
                            std::span<const SweepCell> grid, double d_m,
                            std::vector<ConfusionCounts>* counts_out = nullptr);

}  // namespace poikit
