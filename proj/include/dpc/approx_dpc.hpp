#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "dpc/core.hpp"
#include "dpc/grid.hpp"
#include "dpc/kd_tree.hpp"
#include "dpc/labeling.hpp"
#include "dpc/scheduler.hpp"

namespace dpc {

// Approximate algorithm: exact densities via one enlarged range search per
// grid cell, O(1) approximate dependent points from cell metadata, and an
// exact fallback over density-ordered partitions for the points the cell
// rules cannot resolve.

struct JointSearchResult {
  int cell = -1;
  std::vector<double> center;
  double extension = 0.0;   // distance from the cell center to its farthest member
  std::vector<int> result;  // ids within d_cut + extension of the center
};

// One range search whose result covers the d_cut-ball of every member of the
// cell: any point within d_cut of a member is within d_cut + extension of
// the cell center. The radius is widened by a hair so boundary rounding can
// only add candidates, never drop one.
inline JointSearchResult joint_search(const Dataset& points, const KdTree& tree,
                                      const Grid& grid, int cell_index, double d_cut) {
  JointSearchResult out;
  out.cell = cell_index;
  out.center = grid.cell_center(cell_index);
  double ext_sq = 0.0;
  for (int id : grid.cell(cell_index).members)
    ext_sq = std::max(ext_sq, distance_sq(out.center, points.point(id)));
  out.extension = std::sqrt(ext_sq);
  const double radius = (d_cut + out.extension) * (1.0 + 1e-12);
  out.result = tree.range_search(out.center, radius, /*closed=*/true);
  return out;
}

// Exact densities for every point, cell by cell, plus the per-cell metadata
// the dependent pass needs (densest member, minimum density, neighbor
// cells). Two scheduling rounds: the searches are assigned by member count,
// the per-member scans by member count times result size, once the result
// sizes are known.
inline DensityProfile joint_densities(const Dataset& points, const KdTree& tree,
                                      Grid& grid, double d_cut, int threads) {
  const std::size_t n = points.size();
  const std::size_t m = grid.cell_count();
  DensityProfile profile = DensityProfile::sized(n);
  std::vector<JointSearchResult> joint(m);

  std::vector<CostedTask> tasks(m);
  for (std::size_t ci = 0; ci < m; ++ci)
    tasks[ci] = {static_cast<int>(ci),
                 static_cast<double>(grid.cell(ci).members.size())};
  run_partition(greedy_partition(tasks, threads), [&](int ci) {
    joint[ci] = joint_search(points, tree, grid, ci, d_cut);
  });

  for (std::size_t ci = 0; ci < m; ++ci)
    tasks[ci].cost = static_cast<double>(grid.cell(ci).members.size()) *
                     static_cast<double>(joint[ci].result.size());
  const double r_sq = d_cut * d_cut;
  run_partition(greedy_partition(tasks, threads), [&](int ci) {
    GridCell& cell = grid.cell(ci);
    const auto& candidates = joint[ci].result;
    int pstar = -1;
    double max_rho = -std::numeric_limits<double>::infinity();
    double min_rho = std::numeric_limits<double>::infinity();
    for (int id : cell.members) {
      const auto p = points.point(id);
      std::int64_t count = 0;
      for (int other : candidates)
        count += distance_sq(p, points.point(other)) < r_sq;
      const double rho = jitter(count, id, static_cast<std::int64_t>(n));
      profile.rho[id] = rho;
      if (rho > max_rho) {
        max_rho = rho;
        pstar = id;
      }
      min_rho = std::min(min_rho, rho);
    }
    cell.pstar = pstar;
    cell.min_rho = min_rho;
    // Neighbor cells come from the densest member's own d_cut-ball.
    const auto peak = points.point(pstar);
    std::vector<int> ball;
    for (int other : candidates)
      if (distance_sq(peak, points.point(other)) < r_sq) ball.push_back(other);
    cell.neighbors = neighbor_cells_from_result(grid, ci, ball);
  });
  return profile;
}

// O(1) per point: anyone but the cell peak depends on the cell peak; a cell
// peak depends on the peak of the smallest neighbor cell that is entirely
// denser. Either way the dependent distance is assigned as d_cut, not
// measured. Returns the ids (ascending) that no rule resolved.
inline std::vector<int> approx_dependents(const Grid& grid, DensityProfile& profile,
                                          double d_cut, int threads) {
  const std::size_t n = profile.size();
  std::vector<char> unresolved(n, 0);
  parallel_for_dynamic(n, threads, [&](std::size_t i) {
    const int id = static_cast<int>(i);
    const GridCell& cell = grid.cell(grid.cell_of(id));
    if (id != cell.pstar) {
      profile.dep[id] = cell.pstar;
      profile.delta[id] = d_cut;
      return;
    }
    for (int ci : cell.neighbors) {
      const GridCell& other = grid.cell(ci);
      if (other.min_rho > profile.rho[id]) {
        profile.dep[id] = other.pstar;
        profile.delta[id] = d_cut;
        return;
      }
    }
    unresolved[id] = 1;
  });
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i)
    if (unresolved[i]) out.push_back(static_cast<int>(i));
  return out;
}

// Smallest s >= 2 with n <= s * (s-1)^dim, clamped to the point count.
inline int partition_count(std::size_t n, int dim) {
  int s = 2;
  while (static_cast<double>(s) * std::pow(static_cast<double>(s - 1), dim) <
         static_cast<double>(n))
    ++s;
  if (static_cast<std::size_t>(s) > n) s = static_cast<int>(std::max<std::size_t>(2, n));
  return s;
}

// Density-ordered partition of a point set: s near-equal chunks in ascending
// density, each with its own kd-tree and density range. Any point of a later
// chunk is denser than every point of an earlier one.
struct PartitionSet {
  int s = 0;
  std::size_t total = 0;
  std::vector<std::vector<int>> subsets;  // ascending density chunks
  std::vector<KdTree> trees;
  std::vector<double> rho_lo, rho_hi;  // per-subset density range
};

inline PartitionSet build_partitions(const Dataset& points, std::span<const int> ids,
                                     const std::vector<double>& rho) {
  PartitionSet parts;
  parts.total = ids.size();
  parts.s = partition_count(ids.size(), points.dim > 0 ? points.dim : 1);

  std::vector<int> order(ids.begin(), ids.end());
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rho[a] < rho[b]; });

  const std::size_t base = order.size() / parts.s;
  const std::size_t extra = order.size() % parts.s;
  std::size_t begin = 0;
  for (int j = 0; j < parts.s; ++j) {
    const std::size_t len = base + (static_cast<std::size_t>(j) < extra ? 1 : 0);
    std::span<const int> chunk(order.data() + begin, len);
    parts.subsets.emplace_back(chunk.begin(), chunk.end());
    parts.trees.emplace_back(points, chunk);
    if (len > 0) {
      parts.rho_lo.push_back(rho[chunk.front()]);
      parts.rho_hi.push_back(rho[chunk.back()]);
    } else {
      parts.rho_lo.push_back(std::numeric_limits<double>::infinity());
      parts.rho_hi.push_back(-std::numeric_limits<double>::infinity());
    }
    begin += len;
  }
  return parts;
}

// True dependent points for the unresolved set: subsets entirely denser than
// the point are probed with a nearest-neighbor query, the single subset
// straddling its density is scanned, subsets entirely sparser are skipped.
// Work is assigned statically from the per-point cost estimate.
inline void exact_dependents(const Dataset& points, std::span<const int> unresolved,
                             const PartitionSet& parts, DensityProfile& profile,
                             int threads) {
  const int dim = points.dim > 0 ? points.dim : 1;
  const double n_over_s =
      static_cast<double>(parts.total) / static_cast<double>(parts.s);

  std::vector<CostedTask> tasks(unresolved.size());
  for (std::size_t i = 0; i < unresolved.size(); ++i) {
    const double rho_p = profile.rho[unresolved[i]];
    int candidates = 0;
    bool mixed = false;
    for (int j = 0; j < parts.s; ++j) {
      if (parts.rho_hi[j] > rho_p) {
        ++candidates;
        mixed = mixed || !(parts.rho_lo[j] > rho_p);
      }
    }
    tasks[i] = {static_cast<int>(i),
                cost_dep(static_cast<double>(parts.total), static_cast<double>(parts.s),
                         dim, candidates, mixed)};
  }

  run_partition(greedy_partition(tasks, threads), [&](int task) {
    const int id = unresolved[task];
    const auto p = points.point(id);
    const double rho_p = profile.rho[id];
    double best_d2 = std::numeric_limits<double>::infinity();
    int best = -1;
    auto consider = [&](int cand, double d2) {
      if (d2 < best_d2 || (d2 == best_d2 && cand < best)) {
        best_d2 = d2;
        best = cand;
      }
    };
    for (int j = 0; j < parts.s; ++j) {
      if (!(parts.rho_hi[j] > rho_p)) continue;  // entirely sparser
      if (parts.rho_lo[j] > rho_p) {             // entirely denser
        if (const auto nn = parts.trees[j].nearest_neighbor(p))
          consider(*nn, distance_sq(p, points.point(*nn)));
      } else {  // straddles rho_p
        for (int cand : parts.subsets[j])
          if (profile.rho[cand] > rho_p)
            consider(cand, distance_sq(p, points.point(cand)));
      }
    }
    profile.dep[id] = best;
    profile.delta[id] = best >= 0 ? std::sqrt(best_d2) : kInfiniteDelta;
  });
}

inline RunResult run_approx_dpc(const Dataset& points, const DpcParams& params) {
  params.validate();
  RunResult out;
  Stopwatch watch;
  KdTree tree(points);
  Grid grid(points, approx_grid_side(params.d_cut, points.dim > 0 ? points.dim : 1));
  out.profile = joint_densities(points, tree, grid, params.d_cut, params.threads);
  out.timings.density_seconds = watch.lap();
  const std::vector<int> unresolved =
      approx_dependents(grid, out.profile, params.d_cut, params.threads);
  if (!unresolved.empty()) {
    std::vector<int> all(points.size());
    std::iota(all.begin(), all.end(), 0);
    const PartitionSet parts = build_partitions(points, all, out.profile.rho);
    exact_dependents(points, unresolved, parts, out.profile, params.threads);
  }
  out.timings.dependency_seconds = watch.lap();
  out.clustering = assign_labels(out.profile, params.rho_min, params.delta_min);
  out.timings.labeling_seconds = watch.lap();
  return out;
}

}  // namespace dpc
