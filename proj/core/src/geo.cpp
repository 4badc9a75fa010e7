#include "poikit/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace poikit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

bool valid_position(const LatLon& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) &&
           p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_m(const LatLon& a, const LatLon& b) {
    const double lat1 = a.lat * kDegToRad;
    const double lat2 = b.lat * kDegToRad;
    const double dlat = (b.lat - a.lat) * kDegToRad;
    const double dlon = (b.lon - a.lon) * kDegToRad;

    const double sin_lat = std::sin(dlat / 2.0);
    const double sin_lon = std::sin(dlon / 2.0);
    double h = sin_lat * sin_lat + std::cos(lat1) * std::cos(lat2) * sin_lon * sin_lon;
    h = std::clamp(h, 0.0, 1.0);  // guard rounding before the asin
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double euclidean_deg(const LatLon& a, const LatLon& b) {
    const double dlat = a.lat - b.lat;
    const double dlon = a.lon - b.lon;
    return std::sqrt(dlat * dlat + dlon * dlon);
}

LatLon centroid(std::span<const LatLon> points) {
    if (points.empty()) {
        throw std::invalid_argument("empty point set");
    }
    // Mean of offsets from the first point rather than of raw coordinates:
    // identical inputs average to themselves exactly, and the sums stay small
    // relative to the magnitudes of the coordinates.
    const LatLon anchor = points.front();
    double dlat = 0.0;
    double dlon = 0.0;
    for (const LatLon& p : points) {
        dlat += p.lat - anchor.lat;
        dlon += p.lon - anchor.lon;
    }
    const double n = static_cast<double>(points.size());
    return {anchor.lat + dlat / n, anchor.lon + dlon / n};
}

double lat_degrees_for_meters(double meters) {
    return meters / kMetersPerDegLat;
}

double lon_degrees_for_meters(double meters, double at_lat) {
    // Longitude degrees shrink with cos(lat); pad a little so a bounding box
    // built from this span always covers the haversine ball.
    const double c = std::max(std::cos(at_lat * kDegToRad), 1e-6);
    return meters / (kMetersPerDegLat * c) * 1.01;
}

}  // namespace poikit
