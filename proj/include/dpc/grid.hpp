#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dpc/core.hpp"

namespace dpc {

// Cell side so that any two points sharing a cell are within d_cut.
inline double approx_grid_side(double d_cut, int dim) {
  return d_cut / std::sqrt(static_cast<double>(dim));
}

// Cell side so that any two points sharing a cell are within epsilon * d_cut.
inline double sampled_grid_side(double d_cut, double epsilon, int dim) {
  return epsilon * d_cut / std::sqrt(static_cast<double>(dim));
}

using CellKey = std::vector<std::int64_t>;

struct GridCell {
  CellKey key;
  std::vector<int> members;  // point ids, ascending
  int pstar = -1;            // densest member; filled by the density pass
  double min_rho = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> neighbors;  // cell indices holding points within d_cut of
                               // the cell representative, ascending
};

// Uniform grid over a dataset. Only occupied cells exist. Cells are kept in
// lexicographic key order so that "the smallest qualifying neighbor" is a
// deterministic choice, and cell index order equals key order.
class Grid {
 public:
  Grid(const Dataset& points, double side) : side_(side), dim_(points.dim) {
    if (!(side > 0.0)) throw std::invalid_argument("Grid: side must be positive");
    const std::size_t n = points.size();
    point_cell_.assign(n, -1);
    if (n == 0) return;

    std::unordered_map<CellKey, int, KeyHash> index;
    CellKey key(dim_);
    for (std::size_t id = 0; id < n; ++id) {
      fill_key(points.point(id), key);
      auto [it, fresh] = index.try_emplace(key, static_cast<int>(cells_.size()));
      if (fresh) {
        cells_.emplace_back();
        cells_.back().key = key;
      }
      cells_[it->second].members.push_back(static_cast<int>(id));
    }
    std::sort(cells_.begin(), cells_.end(),
              [](const GridCell& a, const GridCell& b) { return a.key < b.key; });
    for (std::size_t ci = 0; ci < cells_.size(); ++ci)
      for (int id : cells_[ci].members) point_cell_[id] = static_cast<int>(ci);
  }

  double side() const { return side_; }
  int dim() const { return dim_; }
  std::size_t cell_count() const { return cells_.size(); }
  GridCell& cell(std::size_t i) { return cells_[i]; }
  const GridCell& cell(std::size_t i) const { return cells_[i]; }
  int cell_of(int point_id) const { return point_cell_[point_id]; }

  CellKey key_of(std::span<const double> coords) const {
    CellKey key(dim_);
    fill_key(coords, key);
    return key;
  }

  std::vector<double> cell_center(std::size_t i) const {
    std::vector<double> c(dim_);
    for (int k = 0; k < dim_; ++k)
      c[k] = (static_cast<double>(cells_[i].key[k]) + 0.5) * side_;
    return c;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const CellKey& key) const {
      std::size_t h = 1469598103934665603ull;
      for (std::int64_t v : key) {
        h ^= static_cast<std::size_t>(v);
        h *= 1099511628211ull;
      }
      return h;
    }
  };

  void fill_key(std::span<const double> coords, CellKey& key) const {
    for (int k = 0; k < dim_; ++k)
      key[k] = static_cast<std::int64_t>(std::floor(coords[k] / side_));
  }

  double side_;
  int dim_;
  std::vector<GridCell> cells_;     // sorted by key
  std::vector<int> point_cell_;     // point id -> cell index
};

// Distinct cells, other than cell_index itself, that contain points from
// `result`. The caller passes the points within d_cut of the cell's
// representative, so the output is exactly the neighbor-cell list of that
// cell. Returned indices are ascending, i.e. lexicographic key order.
inline std::vector<int> neighbor_cells_from_result(const Grid& grid, int cell_index,
                                                   std::span<const int> result) {
  std::vector<int> out;
  for (int id : result) {
    const int ci = grid.cell_of(id);
    if (ci != cell_index) out.push_back(ci);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dpc
