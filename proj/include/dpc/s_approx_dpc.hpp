#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dpc/approx_dpc.hpp"
#include "dpc/core.hpp"
#include "dpc/grid.hpp"
#include "dpc/kd_tree.hpp"
#include "dpc/labeling.hpp"
#include "dpc/scheduler.hpp"

namespace dpc {

// Sampled algorithm: one picked point per cell of a fine grid (side
// epsilon * d_cut / sqrt(d)) stands in for its cellmates, turning point
// clustering into cell clustering. Only picked points get densities and run
// the dependent-point machinery; the rest follow their cell's picked point.

struct SApproxStats {
  std::size_t range_searches = 0;
  std::size_t clusters_scanned = 0;  // temporary clusters inspected in phase two
  bool used_fallback = false;
};

struct SApproxRunResult : RunResult {
  std::vector<char> picked;  // per point: 1 iff it is its cell's picked point
  std::vector<int> pprime;   // picked points phase one could not resolve
  SApproxStats stats;
};

// Exact densities for the picked points (one strict range search per cell)
// and the neighbor-cell lists derived from those searches. Everyone else
// keeps a NaN density.
inline DensityProfile sampled_densities(const Dataset& points, const KdTree& tree,
                                        Grid& grid, double d_cut, int threads,
                                        std::vector<char>& picked) {
  const std::size_t n = points.size();
  DensityProfile profile = DensityProfile::sized(n);
  picked.assign(n, 0);
  parallel_for_dynamic(grid.cell_count(), threads, [&](std::size_t ci) {
    GridCell& cell = grid.cell(ci);
    const int rep = cell.members.front();  // smallest id in the cell
    picked[rep] = 1;
    const auto result = tree.range_search(points.point(rep), d_cut);
    profile.rho[rep] = jitter(static_cast<std::int64_t>(result.size()), rep,
                              static_cast<std::int64_t>(n));
    cell.neighbors = neighbor_cells_from_result(grid, static_cast<int>(ci), result);
  });
  return profile;
}

// Phase one: a picked point depends on the smallest-id denser picked point
// among its neighbor cells, at its measured distance (at most
// (1+epsilon) * d_cut by construction). Unpicked points depend on their
// cell's picked point at an assigned distance of epsilon * d_cut. Returns
// the picked ids (ascending) left unresolved.
inline std::vector<int> first_phase_dependents(const Dataset& points, const Grid& grid,
                                               DensityProfile& profile, double eps_dcut,
                                               int threads) {
  const std::size_t n = profile.size();
  std::vector<char> unresolved(n, 0);
  parallel_for_dynamic(grid.cell_count(), threads, [&](std::size_t ci) {
    const GridCell& cell = grid.cell(ci);
    const int rep = cell.members.front();
    int best = -1;
    for (int nc : cell.neighbors) {
      const int other = grid.cell(nc).members.front();
      if (profile.rho[other] > profile.rho[rep] && (best < 0 || other < best))
        best = other;
    }
    if (best >= 0) {
      profile.dep[rep] = best;
      profile.delta[rep] = distance(points.point(rep), points.point(best));
    } else {
      unresolved[rep] = 1;
    }
    for (int id : cell.members) {
      if (id == rep) continue;
      profile.dep[id] = rep;
      profile.delta[id] = eps_dcut;
    }
  });
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i)
    if (unresolved[i]) out.push_back(static_cast<int>(i));
  return out;
}

// Phase two: each unresolved picked point needs its nearest denser picked
// point. Picked points group into temporary clusters rooted at the
// unresolved ones (via the phase-one dependency chains); a cluster whose
// center is farther than the best-so-far candidate by more than its radius
// cannot contain anything closer and is skipped. When the unresolved set is
// too large for the quadratic seed step, falls back to the partition-based
// exact computation over the picked points.
inline void second_phase_dependents(const Dataset& points, std::span<const int> pprime,
                                    std::span<const int> picked_ids,
                                    DensityProfile& profile, int threads,
                                    SApproxStats* stats = nullptr) {
  if (pprime.empty()) return;
  const std::size_t n = points.size();
  const auto threshold =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  if (pprime.size() > threshold) {
    if (stats) stats->used_fallback = true;
    const PartitionSet parts = build_partitions(points, picked_ids, profile.rho);
    exact_dependents(points, pprime, parts, profile, threads);
    return;
  }

  // Temporary clusters: root every picked point at the unresolved end of its
  // dependency chain.
  std::vector<int> cluster_of(n, -1);
  for (std::size_t k = 0; k < pprime.size(); ++k) cluster_of[pprime[k]] = static_cast<int>(k);
  std::vector<int> chain;
  for (int id : picked_ids) {
    chain.clear();
    int cur = id;
    while (cluster_of[cur] < 0) {
      chain.push_back(cur);
      cur = profile.dep[cur];
    }
    for (int v : chain) cluster_of[v] = cluster_of[cur];
  }
  std::vector<std::vector<int>> members(pprime.size());
  for (int id : picked_ids) members[cluster_of[id]].push_back(id);
  std::vector<double> radius(pprime.size(), 0.0);
  for (std::size_t k = 0; k < pprime.size(); ++k) {
    const auto root = points.point(pprime[k]);
    for (int id : members[k])
      radius[k] = std::max(radius[k], distance(root, points.point(id)));
  }

  std::atomic<std::size_t> scanned{0};
  parallel_for_dynamic(pprime.size(), threads, [&](std::size_t idx) {
    const int id = pprime[idx];
    const auto p = points.point(id);
    const double rho_p = profile.rho[id];

    // Nearest denser point within the unresolved set itself.
    double seed_d2 = std::numeric_limits<double>::infinity();
    int seed = -1;
    for (int q : pprime) {
      if (!(profile.rho[q] > rho_p)) continue;
      const double d2 = distance_sq(p, points.point(q));
      if (d2 < seed_d2 || (d2 == seed_d2 && q < seed)) {
        seed_d2 = d2;
        seed = q;
      }
    }
    if (seed < 0) {  // densest picked point overall
      profile.dep[id] = -1;
      profile.delta[id] = kInfiniteDelta;
      return;
    }
    const double seed_dist = std::sqrt(seed_d2);

    double best_d2 = seed_d2;
    int best = seed;
    std::size_t local_scanned = 0;
    for (std::size_t k = 0; k < pprime.size(); ++k) {
      const int root = pprime[k];
      if (!(profile.rho[root] > rho_p)) continue;
      if (distance(p, points.point(root)) - radius[k] > seed_dist) continue;
      ++local_scanned;
      for (int q : members[k]) {
        if (!(profile.rho[q] > rho_p)) continue;
        const double d2 = distance_sq(p, points.point(q));
        if (d2 < best_d2 || (d2 == best_d2 && q < best)) {
          best_d2 = d2;
          best = q;
        }
      }
    }
    scanned.fetch_add(local_scanned, std::memory_order_relaxed);
    profile.dep[id] = best;
    profile.delta[id] = std::sqrt(best_d2);
  });
  if (stats) stats->clusters_scanned += scanned.load();
}

inline SApproxRunResult run_s_approx_dpc(const Dataset& points, const DpcParams& params) {
  params.validate();
  if (!(params.epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
  SApproxRunResult out;
  Stopwatch watch;
  const int dim = points.dim > 0 ? points.dim : 1;
  KdTree tree(points);
  Grid grid(points, sampled_grid_side(params.d_cut, params.epsilon, dim));
  out.profile = sampled_densities(points, tree, grid, params.d_cut, params.threads,
                                  out.picked);
  out.stats.range_searches = grid.cell_count();
  out.timings.density_seconds = watch.lap();

  out.pprime = first_phase_dependents(points, grid, out.profile,
                                      params.epsilon * params.d_cut, params.threads);
  std::vector<int> picked_ids;
  picked_ids.reserve(grid.cell_count());
  for (std::size_t i = 0; i < out.picked.size(); ++i)
    if (out.picked[i]) picked_ids.push_back(static_cast<int>(i));
  second_phase_dependents(points, out.pprime, picked_ids, out.profile, params.threads,
                          &out.stats);
  out.timings.dependency_seconds = watch.lap();

  out.clustering = assign_labels(out.profile, params.rho_min, params.delta_min);
  out.timings.labeling_seconds = watch.lap();
  return out;
}

}  // namespace dpc
