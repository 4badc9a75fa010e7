#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poikit/geo.hpp"

namespace poikit {

/// One timestamped GPS fix. Coordinates are validated at ingestion, never
/// clamped; the optional quality fields must be non-negative when present.
struct TrajectoryPoint {
    std::string user_id;
    std::int64_t timestamp = 0;  // seconds since Unix epoch, UTC
    double lat = 0.0;            // decimal degrees
    double lon = 0.0;            // decimal degrees
    std::optional<double> alt;   // meters
    std::optional<double> speed; // km/h
    std::optional<double> h_acc; // meters
    std::optional<double> v_acc; // meters

    LatLon position() const { return {lat, lon}; }
};

/// Throws std::invalid_argument when a field is out of range.
void validate_point(const TrajectoryPoint& p);

/// One user's fixes, sorted by (timestamp, lat, lon) with exact
/// (timestamp, lat, lon) duplicates removed.
struct Trajectory {
    std::string user_id;
    std::vector<TrajectoryPoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    LatLon position(std::size_t i) const { return points[i].position(); }
};

/// Builds a Trajectory from raw fixes: validates every point, checks that all
/// fixes carry user_id, sorts and deduplicates.
Trajectory make_trajectory(std::string user_id, std::vector<TrajectoryPoint> points);

/// Average speed from p to q in km/h. Requires q.timestamp > p.timestamp;
/// throws std::invalid_argument("non-positive time delta") otherwise.
double speed_between(const TrajectoryPoint& p, const TrajectoryPoint& q);

}  // namespace poikit
