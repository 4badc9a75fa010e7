#include "poikit/neighbor_grid.hpp"

#include <cmath>

namespace poikit {

NeighborGrid::NeighborGrid(const std::vector<LatLon>& positions, double cell_deg)
    : positions_(positions), cell_deg_(cell_deg > 0.0 ? cell_deg : 1e-9) {
    cells_.reserve(positions.size());
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        cells_[cell_key(positions_[i].lat, positions_[i].lon)].push_back(i);
    }
}

std::int64_t NeighborGrid::cell_key(double lat, double lon) const {
    const auto row = static_cast<std::int64_t>(std::floor(lat / cell_deg_));
    const auto col = static_cast<std::int64_t>(std::floor(lon / cell_deg_));
    // Key collisions merely widen a bucket; callers re-filter with the exact
    // metric, so candidate sets only need to be supersets.
    return row * 2'000'003 + col;
}

void NeighborGrid::candidates_in_box(const LatLon& center, double dlat, double dlon,
                                     std::vector<std::size_t>& out) const {
    out.clear();
    const auto row_lo = static_cast<std::int64_t>(std::floor((center.lat - dlat) / cell_deg_));
    const auto row_hi = static_cast<std::int64_t>(std::floor((center.lat + dlat) / cell_deg_));
    const auto col_lo = static_cast<std::int64_t>(std::floor((center.lon - dlon) / cell_deg_));
    const auto col_hi = static_cast<std::int64_t>(std::floor((center.lon + dlon) / cell_deg_));
    for (std::int64_t row = row_lo; row <= row_hi; ++row) {
        for (std::int64_t col = col_lo; col <= col_hi; ++col) {
            auto it = cells_.find(row * 2'000'003 + col);
            if (it == cells_.end()) {
                continue;
            }
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
}

}  // namespace poikit
