#pragma once

#include <span>

namespace poikit {

/// Geodetic position, decimal degrees. lat in [-90, 90], lon in [-180, 180].
struct LatLon {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const LatLon&, const LatLon&) = default;
};

/// Mean Earth radius of the spherical model, meters.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Meters spanned by one degree of latitude on the spherical model.
inline constexpr double kMetersPerDegLat = kEarthRadiusM * 3.14159265358979323846 / 180.0;

bool valid_position(const LatLon& p);

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(const LatLon& a, const LatLon& b);

/// Plain Euclidean distance in raw degree space: sqrt(dlat^2 + dlon^2).
/// Used where neighborhood radii are expressed in degrees rather than meters.
double euclidean_deg(const LatLon& a, const LatLon& b);

/// Component-wise arithmetic mean. Valid at city-scale extents; throws
/// std::invalid_argument("empty point set") on empty input.
LatLon centroid(std::span<const LatLon> points);

/// Degree spans covering a metric radius, for bounding-box prefilters.
double lat_degrees_for_meters(double meters);
double lon_degrees_for_meters(double meters, double at_lat);

}  // namespace poikit
