#include "poikit/cluster.hpp"

#include <algorithm>
#include <stdexcept>

namespace poikit {

double cluster_radius_m(const Trajectory& traj, const std::vector<std::size_t>& members,
                        const LatLon& center) {
    double radius = 0.0;
    for (std::size_t i : members) {
        radius = std::max(radius, haversine_m(center, traj.position(i)));
    }
    return radius;
}

Cluster make_cluster(const Trajectory& traj, std::vector<std::size_t> members,
                     const LatLon& center, int visit_count) {
    if (members.empty()) {
        throw std::invalid_argument("cluster without members");
    }
    std::sort(members.begin(), members.end());
    Cluster c;
    c.centroid = center;
    c.visit_count = visit_count;
    c.first_seen = traj.points[members.front()].timestamp;
    c.last_seen = traj.points[members.back()].timestamp;
    c.radius_m = cluster_radius_m(traj, members, center);
    c.members = std::move(members);
    return c;
}

Cluster make_cluster(const Trajectory& traj, std::vector<std::size_t> members, int visit_count) {
    std::vector<LatLon> positions;
    positions.reserve(members.size());
    for (std::size_t i : members) {
        positions.push_back(traj.position(i));
    }
    return make_cluster(traj, std::move(members), centroid(positions), visit_count);
}

int count_index_episodes(const std::vector<std::size_t>& sorted_members) {
    if (sorted_members.empty()) {
        return 0;
    }
    int episodes = 1;
    for (std::size_t i = 1; i < sorted_members.size(); ++i) {
        if (sorted_members[i] != sorted_members[i - 1] + 1) {
            ++episodes;
        }
    }
    return episodes;
}

void normalize_cluster_order(std::vector<Cluster>& clusters) {
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        return a.members.front() < b.members.front();
    });
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        clusters[i].id = static_cast<int>(i);
    }
}

}  // namespace poikit
