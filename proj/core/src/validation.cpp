#include "poikit/validation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <exception>
#include <limits>
#include <stdexcept>
#include <utility>

#include "poikit/parallel.hpp"

namespace poikit {

namespace {

constexpr std::array<std::pair<std::string_view, Category>, 9> kCategories{{
    {"transport", Category::kTransport},
    {"study", Category::kStudy},
    {"residency", Category::kResidency},
    {"work", Category::kWork},
    {"sustenance", Category::kSustenance},
    {"shopping", Category::kShopping},
    {"sports", Category::kSports},
    {"leisure", Category::kLeisure},
    {"other", Category::kOther},
}};

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::optional<Category> parse_category(std::string_view token) {
    const std::string folded = lowercase(token);
    for (const auto& [name, cat] : kCategories) {
        if (folded == name) {
            return cat;
        }
    }
    return std::nullopt;
}

std::string_view category_name(Category c) {
    for (const auto& [name, cat] : kCategories) {
        if (cat == c) {
            return name;
        }
    }
    return "other";
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
}

std::vector<ClusterRef> cluster_refs(std::span<const Cluster> clusters) {
    std::vector<ClusterRef> refs;
    refs.reserve(clusters.size());
    for (const Cluster& c : clusters) {
        refs.push_back({c.id, c.centroid});
    }
    return refs;
}

std::vector<GtLink> link_ground_truth(std::span<const GroundTruthPoint> gt,
                                      std::span<const ClusterRef> clusters) {
    if (gt.empty()) {
        throw std::invalid_argument("no ground truth");
    }
    std::vector<GtLink> links;
    links.reserve(gt.size());
    for (const GroundTruthPoint& point : gt) {
        GtLink link;
        link.gt_id = point.gt_id;
        link.distance_deg = std::numeric_limits<double>::infinity();
        link.distance_m = std::numeric_limits<double>::infinity();
        for (const ClusterRef& c : clusters) {
            const double d = euclidean_deg(point.position(), c.centroid);
            const bool closer = d < link.distance_deg ||
                                (d == link.distance_deg && link.cluster_id && c.id < *link.cluster_id);
            if (closer) {
                link.distance_deg = d;
                link.cluster_id = c.id;
                link.distance_m = haversine_m(point.position(), c.centroid);
            }
        }
        links.push_back(link);
    }
    return links;
}

std::vector<GtLink> link_ground_truth(std::span<const GroundTruthPoint> gt,
                                      std::span<const Cluster> clusters) {
    return link_ground_truth(gt, std::span<const ClusterRef>(cluster_refs(clusters)));
}

ConfusionCounts classify(std::span<const GtLink> links,
                         std::span<const GroundTruthPoint> gt, double d_m) {
    if (links.size() != gt.size()) {
        throw std::invalid_argument("link/gt mismatch");
    }
    if (d_m <= 0.0) {
        throw std::invalid_argument("validation distance must be positive");
    }
    ConfusionCounts counts;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (links[i].gt_id != gt[i].gt_id) {
            throw std::invalid_argument("link/gt mismatch");
        }
        const bool distance_ok = links[i].cluster_id.has_value() && links[i].distance_m <= d_m;
        if (gt[i].validated) {
            distance_ok ? ++counts.tp : ++counts.fn;
        } else {
            distance_ok ? ++counts.fp : ++counts.tn;
        }
    }
    return counts;
}

RocRates roc_rates(const ConfusionCounts& c) {
    RocRates r;
    const auto tp_den = c.tp + c.fn;
    const auto fp_den = c.fp + c.tn;
    if (tp_den > 0) {
        r.tpr = static_cast<double>(c.tp) / static_cast<double>(tp_den);
    } else {
        r.tpr_defined = false;
    }
    if (fp_den > 0) {
        r.fpr = static_cast<double>(c.fp) / static_cast<double>(fp_den);
    } else {
        r.fpr_defined = false;
    }
    return r;
}

std::vector<RocPoint> sweep(const std::map<std::string, Trajectory>& trajectories,
                            const std::map<std::string, std::vector<GroundTruthPoint>>& ground_truth,
                            std::span<const SweepCell> grid, double d_m,
                            std::vector<ConfusionCounts>* counts_out) {
    if (grid.empty()) {
        throw std::invalid_argument("empty sweep grid");
    }
    std::vector<const std::pair<const std::string, std::vector<GroundTruthPoint>>*> users;
    users.reserve(ground_truth.size());
    for (const auto& entry : ground_truth) {
        if (!trajectories.contains(entry.first)) {
            throw std::invalid_argument("no trajectory for user '" + entry.first + "'");
        }
        users.push_back(&entry);
    }

    // One slot per (cell, user) so workers never contend; merge order is fixed
    // afterwards regardless of scheduling.
    const std::size_t n_users = users.size();
    std::vector<ConfusionCounts> slots(grid.size() * n_users);
    parallel_for(grid.size() * n_users, [&](std::size_t task) {
        const std::size_t cell_idx = task / n_users;
        const std::size_t user_idx = task % n_users;
        const SweepCell& cell = grid[cell_idx];
        const auto& [user_id, gt] = *users[user_idx];
        try {
            const Trajectory& traj = trajectories.at(user_id);
            const std::vector<Cluster> clusters = run_algorithm(traj, cell.params);
            const std::vector<GtLink> links = link_ground_truth(gt, clusters);
            slots[task] = classify(links, gt, d_m);
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep cell '" + cell.label + "', user '" + user_id +
                                     "': " + e.what());
        }
    });

    std::vector<RocPoint> points;
    points.reserve(grid.size());
    if (counts_out) {
        counts_out->clear();
    }
    for (std::size_t cell_idx = 0; cell_idx < grid.size(); ++cell_idx) {
        ConfusionCounts total;
        for (std::size_t user_idx = 0; user_idx < n_users; ++user_idx) {
            total += slots[cell_idx * n_users + user_idx];
        }
        const RocRates rates = roc_rates(total);
        points.push_back({grid[cell_idx].label, rates.fpr, rates.tpr});
        if (counts_out) {
            counts_out->push_back(total);
        }
    }
    return points;
}

}  // namespace poikit
