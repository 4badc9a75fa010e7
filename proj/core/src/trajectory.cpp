#include "poikit/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace poikit {

void validate_point(const TrajectoryPoint& p) {
    if (!valid_position(p.position())) {
        throw std::invalid_argument("coordinate out of range");
    }
    for (const auto& field : {p.speed, p.h_acc, p.v_acc}) {
        if (field && (!std::isfinite(*field) || *field < 0.0)) {
            throw std::invalid_argument("negative quality field");
        }
    }
    if (p.alt && !std::isfinite(*p.alt)) {
        throw std::invalid_argument("non-finite altitude");
    }
}

Trajectory make_trajectory(std::string user_id, std::vector<TrajectoryPoint> points) {
    for (const TrajectoryPoint& p : points) {
        validate_point(p);
        if (p.user_id != user_id) {
            throw std::invalid_argument("mixed user ids in trajectory");
        }
    }
    std::sort(points.begin(), points.end(), [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
        return std::tie(a.timestamp, a.lat, a.lon) < std::tie(b.timestamp, b.lat, b.lon);
    });
    auto dup = std::unique(points.begin(), points.end(),
                           [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
                               return a.timestamp == b.timestamp && a.lat == b.lat && a.lon == b.lon;
                           });
    points.erase(dup, points.end());
    return Trajectory{std::move(user_id), std::move(points)};
}

double speed_between(const TrajectoryPoint& p, const TrajectoryPoint& q) {
    const std::int64_t dt = q.timestamp - p.timestamp;
    if (dt <= 0) {
        throw std::invalid_argument("non-positive time delta");
    }
    const double meters = haversine_m(p.position(), q.position());
    return meters / static_cast<double>(dt) * 3.6;  // m/s -> km/h
}

}  // namespace poikit
