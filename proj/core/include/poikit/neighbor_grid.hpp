#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "poikit/geo.hpp"

namespace poikit {

/// Uniform hash grid over positions in degree space. Queries return candidate
/// indices from the cells covering a lat/lon box; the caller applies the exact
/// metric test.
class NeighborGrid {
public:
    NeighborGrid(const std::vector<LatLon>& positions, double cell_deg);

    /// Appends to `out` all indices whose cell intersects the box
    /// [center.lat +- dlat, center.lon +- dlon]. `out` is cleared first.
    void candidates_in_box(const LatLon& center, double dlat, double dlon,
                           std::vector<std::size_t>& out) const;

private:
    std::int64_t cell_key(double lat, double lon) const;

    const std::vector<LatLon>& positions_;
    double cell_deg_;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

}  // namespace poikit
