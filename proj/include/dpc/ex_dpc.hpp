#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dpc/core.hpp"
#include "dpc/kd_tree.hpp"
#include "dpc/labeling.hpp"
#include "dpc/scan_dpc.hpp"
#include "dpc/scheduler.hpp"

namespace dpc {

// Exact algorithm: densities via one range count per point on a shared
// kd-tree, dependent points via a second kd-tree grown incrementally in
// descending density order.

// Range-count pass, parallelized by dynamic pull since per-point cost is
// unknowable in advance. Matches scan_densities bitwise.
inline DensityProfile ex_dpc_densities(const Dataset& points, const KdTree& tree,
                                       double d_cut, int threads) {
  const std::size_t n = points.size();
  DensityProfile profile = DensityProfile::sized(n);
  parallel_for_dynamic(n, threads, [&](std::size_t i) {
    const auto count = static_cast<std::int64_t>(tree.range_count(points.point(i), d_cut));
    profile.rho[i] = jitter(count, static_cast<std::int64_t>(i),
                            static_cast<std::int64_t>(n));
  });
  return profile;
}

// Strictly sequential: when a point is processed, the tree holds exactly the
// points of higher density, so its nearest neighbor there is its dependent
// point. The first (densest) point gets an infinite delta.
inline void ex_dpc_dependencies(const Dataset& points, DensityProfile& profile) {
  const std::size_t n = points.size();
  if (n == 0) return;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return profile.rho[a] > profile.rho[b]; });

  KdTree tree(points.dim);
  for (int id : order) {
    const auto p = points.point(id);
    if (const auto nn = tree.nearest_neighbor(p)) {
      profile.dep[id] = *nn;
      profile.delta[id] = distance(p, points.point(*nn));
    } else {
      profile.dep[id] = -1;
      profile.delta[id] = kInfiniteDelta;
    }
    tree.insert(id, p);
  }
}

inline RunResult run_ex_dpc(const Dataset& points, const DpcParams& params) {
  params.validate();
  RunResult out;
  Stopwatch watch;
  KdTree tree(points);
  out.profile = ex_dpc_densities(points, tree, params.d_cut, params.threads);
  out.timings.density_seconds = watch.lap();
  ex_dpc_dependencies(points, out.profile);
  out.timings.dependency_seconds = watch.lap();
  out.clustering = assign_labels(out.profile, params.rho_min, params.delta_min);
  out.timings.labeling_seconds = watch.lap();
  return out;
}

}  // namespace dpc
