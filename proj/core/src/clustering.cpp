#include "poikit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "poikit/neighbor_grid.hpp"

namespace poikit {

namespace {

std::vector<LatLon> positions_of(const Trajectory& traj) {
    std::vector<LatLon> pos;
    pos.reserve(traj.size());
    for (const TrajectoryPoint& p : traj.points) {
        pos.push_back(p.position());
    }
    return pos;
}

void require_nonempty(const Trajectory& traj) {
    if (traj.empty()) {
        throw std::invalid_argument("empty trajectory");
    }
}

struct DisjointSet {
    std::vector<std::size_t> parent;

    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// ---- k-means ---------------------------------------------------------------

double sq_euclidean_deg(const LatLon& a, const LatLon& b) {
    const double dlat = a.lat - b.lat;
    const double dlon = a.lon - b.lon;
    return dlat * dlat + dlon * dlon;
}

std::size_t nearest_centroid(const LatLon& p, const std::vector<LatLon>& centroids) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        const double d = sq_euclidean_deg(p, centroids[j]);
        if (d < best_d) {  // ties keep the lowest centroid index
            best_d = d;
            best = j;
        }
    }
    return best;
}

std::vector<std::size_t> assign_all(const std::vector<LatLon>& pos,
                                    const std::vector<LatLon>& centroids) {
    std::vector<std::size_t> labels(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        labels[i] = nearest_centroid(pos[i], centroids);
    }
    return labels;
}

double total_sse(const std::vector<LatLon>& pos, const std::vector<std::size_t>& labels,
                 const std::vector<LatLon>& centroids) {
    double sse = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        sse += sq_euclidean_deg(pos[i], centroids[labels[i]]);
    }
    return sse;
}

std::vector<LatLon> distinct_positions(const std::vector<LatLon>& pos) {
    struct Hash {
        std::size_t operator()(const LatLon& p) const {
            const std::size_t a = std::hash<double>{}(p.lat);
            const std::size_t b = std::hash<double>{}(p.lon);
            return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
        }
    };
    std::unordered_set<LatLon, Hash> seen;
    std::vector<LatLon> distinct;
    for (const LatLon& p : pos) {
        if (seen.insert(p).second) {
            distinct.push_back(p);
        }
    }
    return distinct;
}

// ---- merge phases ----------------------------------------------------------

// Repeatedly merges connected components of `close_pair` until no pair of the
// (recomputed) clusters is related anymore. A single pass is not enough: a
// merged cluster has a new centroid and radius, which can move it within reach
// of a third cluster.
template <typename ClosePair>
std::vector<Cluster> merge_until_stable(const Trajectory& traj, std::vector<Cluster> clusters,
                                        ClosePair close_pair) {
    while (clusters.size() > 1) {
        DisjointSet dsu(clusters.size());
        bool any = false;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                if (close_pair(clusters[i], clusters[j])) {
                    dsu.unite(i, j);
                    any = true;
                }
            }
        }
        if (!any) {
            break;
        }
        std::vector<std::vector<std::size_t>> groups(clusters.size());
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            groups[dsu.find(i)].push_back(i);
        }
        std::vector<Cluster> merged;
        for (const auto& group : groups) {
            if (group.empty()) {
                continue;
            }
            if (group.size() == 1) {
                merged.push_back(std::move(clusters[group.front()]));
                continue;
            }
            std::vector<std::size_t> members;
            int visits = 0;
            for (std::size_t idx : group) {
                members.insert(members.end(), clusters[idx].members.begin(),
                               clusters[idx].members.end());
                visits += clusters[idx].visit_count;
            }
            merged.push_back(make_cluster(traj, std::move(members), visits));
        }
        clusters = std::move(merged);
    }
    return clusters;
}

}  // namespace

std::vector<Cluster> kmeans_traced(const Trajectory& traj, const KMeansParams& p,
                                   std::vector<double>& sse_per_iteration) {
    require_nonempty(traj);
    if (p.k < 1 || p.max_iterations < 1) {
        throw std::invalid_argument("kmeans parameters out of range");
    }
    sse_per_iteration.clear();

    const std::vector<LatLon> pos = positions_of(traj);
    std::vector<LatLon> pool = distinct_positions(pos);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(p.k), pool.size());

    std::mt19937_64 rng(p.seed);
    for (std::size_t j = 0; j < k; ++j) {
        // partial Fisher-Yates; rng()%m is deterministic across platforms and
        // its bias is irrelevant for seeding
        const std::size_t pick = j + static_cast<std::size_t>(rng() % (pool.size() - j));
        std::swap(pool[j], pool[pick]);
    }
    std::vector<LatLon> centroids(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));

    std::vector<std::size_t> labels = assign_all(pos, centroids);
    sse_per_iteration.push_back(total_sse(pos, labels, centroids));

    for (int iter = 1; iter < p.max_iterations; ++iter) {
        // update step: means of the current partition, empty slots dropped;
        // sums are anchored at the current centroid so a cluster of identical
        // points keeps its exact position
        std::vector<double> lat_sum(centroids.size(), 0.0);
        std::vector<double> lon_sum(centroids.size(), 0.0);
        std::vector<std::size_t> count(centroids.size(), 0);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            lat_sum[labels[i]] += pos[i].lat - centroids[labels[i]].lat;
            lon_sum[labels[i]] += pos[i].lon - centroids[labels[i]].lon;
            ++count[labels[i]];
        }
        std::vector<LatLon> means;
        std::vector<std::size_t> remap(centroids.size(), 0);
        for (std::size_t j = 0; j < centroids.size(); ++j) {
            if (count[j] == 0) {
                continue;
            }
            remap[j] = means.size();
            means.push_back({centroids[j].lat + lat_sum[j] / static_cast<double>(count[j]),
                             centroids[j].lon + lon_sum[j] / static_cast<double>(count[j])});
        }
        std::vector<std::size_t> prev(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            prev[i] = remap[labels[i]];
        }

        centroids = std::move(means);
        labels = assign_all(pos, centroids);
        sse_per_iteration.push_back(total_sse(pos, labels, centroids));
        if (labels == prev) {
            break;
        }
    }

    std::vector<std::vector<std::size_t>> members(centroids.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        members[labels[i]].push_back(i);
    }
    std::vector<Cluster> clusters;
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        if (members[j].empty()) {
            continue;
        }
        const int visits = count_index_episodes(members[j]);
        clusters.push_back(make_cluster(traj, std::move(members[j]), centroids[j], visits));
    }
    normalize_cluster_order(clusters);
    return clusters;
}

std::vector<Cluster> kmeans(const Trajectory& traj, const KMeansParams& p) {
    std::vector<double> sse;
    return kmeans_traced(traj, p, sse);
}

std::vector<Cluster> dbscan(const Trajectory& traj, const DbscanParams& p) {
    require_nonempty(traj);
    if (p.eps_deg <= 0.0 || p.min_pts < 1) {
        throw std::invalid_argument("dbscan parameters out of range");
    }
    const std::vector<LatLon> pos = positions_of(traj);
    const std::size_t n = pos.size();
    const NeighborGrid grid(pos, p.eps_deg);

    std::vector<std::size_t> box;
    auto for_each_neighbor = [&](std::size_t i, auto&& fn) {
        grid.candidates_in_box(pos[i], p.eps_deg, p.eps_deg, box);
        for (std::size_t j : box) {
            if (euclidean_deg(pos[i], pos[j]) <= p.eps_deg) {
                fn(j);
            }
        }
    };

    // Neighbor lists over dense blobs are quadratic in size, so core status is
    // computed by counting and BFS recomputes neighborhoods on demand.
    std::vector<bool> core(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        for_each_neighbor(i, [&](std::size_t) { ++count; });
        core[i] = count >= static_cast<std::size_t>(p.min_pts);
    }

    constexpr int kUnlabeled = -1;
    std::vector<int> label(n, kUnlabeled);
    int next_label = 0;
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || label[i] != kUnlabeled) {
            continue;
        }
        const int cid = next_label++;
        label[i] = cid;
        queue.assign(1, i);
        std::vector<std::size_t> local;
        while (!queue.empty()) {
            const std::size_t u = queue.back();
            queue.pop_back();
            grid.candidates_in_box(pos[u], p.eps_deg, p.eps_deg, local);
            for (std::size_t v : local) {
                if (core[v] && label[v] == kUnlabeled &&
                    euclidean_deg(pos[u], pos[v]) <= p.eps_deg) {
                    label[v] = cid;
                    queue.push_back(v);
                }
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) {
            continue;
        }
        double best_d = std::numeric_limits<double>::infinity();
        std::size_t best_core = n;
        for_each_neighbor(i, [&](std::size_t j) {
            if (!core[j]) {
                return;
            }
            const double d = euclidean_deg(pos[i], pos[j]);
            if (d < best_d || (d == best_d && j < best_core)) {
                best_d = d;
                best_core = j;
            }
        });
        if (best_core < n) {
            label[i] = label[best_core];
        }
    }

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(next_label));
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] != kUnlabeled) {
            members[static_cast<std::size_t>(label[i])].push_back(i);
        }
    }
    std::vector<Cluster> clusters;
    for (auto& m : members) {
        const int visits = count_index_episodes(m);
        clusters.push_back(make_cluster(traj, std::move(m), visits));
    }
    normalize_cluster_order(clusters);
    return clusters;
}

std::vector<Cluster> dj_cluster(const Trajectory& traj, const DjParams& p) {
    if (traj.size() < 2) {
        throw std::invalid_argument("trajectory too short");
    }
    if (p.r_m <= 0.0 || p.min_pts < 1 || p.speed_threshold_kmh < 0.0) {
        throw std::invalid_argument("dj cluster parameters out of range");
    }

    // Moving-point removal. The first point has no predecessor and is always
    // kept; a zero time delta counts as infinite speed.
    std::vector<std::size_t> survivors;
    survivors.push_back(0);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const std::int64_t dt = traj.points[i].timestamp - traj.points[i - 1].timestamp;
        const double v = dt > 0 ? speed_between(traj.points[i - 1], traj.points[i])
                                : std::numeric_limits<double>::infinity();
        if (!(v > p.speed_threshold_kmh)) {
            survivors.push_back(i);
        }
    }

    std::vector<LatLon> spos;
    spos.reserve(survivors.size());
    for (std::size_t i : survivors) {
        spos.push_back(traj.position(i));
    }
    const double dlat = lat_degrees_for_meters(p.r_m);
    const NeighborGrid grid(spos, dlat);

    std::vector<std::size_t> box;
    auto for_each_neighbor = [&](std::size_t a, auto&& fn) {
        grid.candidates_in_box(spos[a], dlat, lon_degrees_for_meters(p.r_m, spos[a].lat), box);
        for (std::size_t b : box) {
            if (haversine_m(spos[a], spos[b]) <= p.r_m) {
                fn(b);
            }
        }
    };

    std::vector<bool> dense(survivors.size(), false);
    for (std::size_t a = 0; a < survivors.size(); ++a) {
        std::size_t count = 0;
        for_each_neighbor(a, [&](std::size_t) { ++count; });
        dense[a] = count >= static_cast<std::size_t>(p.min_pts);
    }

    // Candidate clusters are the neighborhoods of dense points; candidates
    // sharing any point merge. Every dense point within r of the same survivor
    // therefore belongs to one component, and that survivor joins it.
    DisjointSet dsu(survivors.size());
    std::vector<std::size_t> anchor(survivors.size(), survivors.size());
    for (std::size_t a = 0; a < survivors.size(); ++a) {
        std::size_t first_dense = survivors.size();
        for_each_neighbor(a, [&](std::size_t b) {
            if (!dense[b]) {
                return;
            }
            if (first_dense == survivors.size()) {
                first_dense = b;
            } else {
                dsu.unite(first_dense, b);
            }
        });
        anchor[a] = first_dense;
    }

    std::vector<std::vector<std::size_t>> members(survivors.size());
    for (std::size_t a = 0; a < survivors.size(); ++a) {
        if (anchor[a] < survivors.size()) {
            members[dsu.find(anchor[a])].push_back(survivors[a]);
        }
    }
    std::vector<Cluster> clusters;
    for (auto& m : members) {
        if (m.empty()) {
            continue;
        }
        const int visits = count_index_episodes(m);
        clusters.push_back(make_cluster(traj, std::move(m), visits));
    }
    normalize_cluster_order(clusters);
    return clusters;
}

std::vector<Cluster> dt_candidates(const Trajectory& traj, const DtParams& p) {
    require_nonempty(traj);
    if (p.d_m <= 0.0 || p.t_s <= 0.0) {
        throw std::invalid_argument("dt cluster parameters out of range");
    }

    std::vector<Cluster> candidates;
    auto close_run = [&](std::size_t first, std::size_t last) {
        const double span =
            static_cast<double>(traj.points[last].timestamp - traj.points[first].timestamp);
        if (span > p.t_s) {
            std::vector<std::size_t> members(last - first + 1);
            std::iota(members.begin(), members.end(), first);
            candidates.push_back(make_cluster(traj, std::move(members), 1));
        }
    };

    // running mean anchored at the run's first fix (see geo centroid note)
    std::size_t run_start = 0;
    LatLon anchor = traj.position(0);
    double dlat_sum = 0.0;
    double dlon_sum = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double n = static_cast<double>(i - run_start);
        const LatLon running_centroid{anchor.lat + dlat_sum / n, anchor.lon + dlon_sum / n};
        if (haversine_m(traj.position(i), running_centroid) <= p.d_m) {
            dlat_sum += traj.points[i].lat - anchor.lat;
            dlon_sum += traj.points[i].lon - anchor.lon;
        } else {
            close_run(run_start, i - 1);
            run_start = i;
            anchor = traj.position(i);
            dlat_sum = 0.0;
            dlon_sum = 0.0;
        }
    }
    close_run(run_start, traj.size() - 1);
    normalize_cluster_order(candidates);
    return candidates;
}

std::vector<Cluster> dt_cluster(const Trajectory& traj, const DtParams& p) {
    std::vector<Cluster> clusters =
        merge_until_stable(traj, dt_candidates(traj, p), [&](const Cluster& a, const Cluster& b) {
            return haversine_m(a.centroid, b.centroid) <= p.d_m / 3.0;
        });
    normalize_cluster_order(clusters);
    return clusters;
}

std::vector<Cluster> generate_gt_candidates(const Trajectory& traj, const GtGenParams& p) {
    if (p.min_visits < 1) {
        throw std::invalid_argument("min_visits out of range");
    }
    std::vector<Cluster> clusters =
        merge_until_stable(traj, dt_candidates(traj, DtParams{p.d_m, p.t_s}),
                           [](const Cluster& a, const Cluster& b) {
                               return haversine_m(a.centroid, b.centroid) <=
                                      a.radius_m + b.radius_m;
                           });
    std::erase_if(clusters, [&](const Cluster& c) { return c.visit_count < p.min_visits; });
    normalize_cluster_order(clusters);
    return clusters;
}

std::vector<Cluster> run_algorithm(const Trajectory& traj, const AlgoParams& params) {
    return std::visit(
        [&](const auto& p) -> std::vector<Cluster> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, KMeansParams>) {
                return kmeans(traj, p);
            } else if constexpr (std::is_same_v<T, DbscanParams>) {
                return dbscan(traj, p);
            } else if constexpr (std::is_same_v<T, DjParams>) {
                return dj_cluster(traj, p);
            } else if constexpr (std::is_same_v<T, DtParams>) {
                return dt_cluster(traj, p);
            } else {
                return generate_gt_candidates(traj, p);
            }
        },
        params);
}

std::size_t cluster_count(const Trajectory& traj, const AlgoParams& params) {
    return run_algorithm(traj, params).size();
}

std::string algorithm_name(const AlgoParams& params) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, KMeansParams>) {
                return "kmeans";
            } else if constexpr (std::is_same_v<T, DbscanParams>) {
                return "dbscan";
            } else if constexpr (std::is_same_v<T, DjParams>) {
                return "djcluster";
            } else if constexpr (std::is_same_v<T, DtParams>) {
                return "dtcluster";
            } else {
                return "gtgen";
            }
        },
        params);
}

}  // namespace poikit
