#pragma once

#include <cstdint>
#include <limits>

#include "dpc/core.hpp"
#include "dpc/labeling.hpp"

namespace dpc {

// Quadratic reference implementation. Deliberately simple and
// single-threaded: it is the ground truth the indexed algorithms are checked
// against.

// Densities by pairwise scan. A point counts itself (distance 0 < d_cut).
inline DensityProfile scan_densities(const Dataset& points, double d_cut) {
  const std::size_t n = points.size();
  DensityProfile profile = DensityProfile::sized(n);
  const double r_sq = d_cut * d_cut;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = points.point(i);
    std::int64_t count = 0;
    for (std::size_t j = 0; j < n; ++j)
      count += distance_sq(pi, points.point(j)) < r_sq;
    profile.rho[i] = jitter(count, static_cast<std::int64_t>(i),
                            static_cast<std::int64_t>(n));
  }
  return profile;
}

// Dependent points by pairwise scan: for each point, the nearest point of
// strictly higher density, ties broken toward the smaller id. The single
// highest-density point gets dep -1 and an infinite delta.
inline void scan_dependencies(const Dataset& points, DensityProfile& profile) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = points.point(i);
    double best_d2 = std::numeric_limits<double>::infinity();
    int best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(profile.rho[j] > profile.rho[i])) continue;
      const double d2 = distance_sq(pi, points.point(j));
      if (d2 < best_d2) {
        best_d2 = d2;
        best = static_cast<int>(j);
      }
    }
    profile.dep[i] = best;
    profile.delta[i] = best >= 0 ? std::sqrt(best_d2) : kInfiniteDelta;
  }
}

inline RunResult run_scan(const Dataset& points, const DpcParams& params) {
  params.validate();
  RunResult out;
  Stopwatch watch;
  out.profile = scan_densities(points, params.d_cut);
  out.timings.density_seconds = watch.lap();
  scan_dependencies(points, out.profile);
  out.timings.dependency_seconds = watch.lap();
  out.clustering = assign_labels(out.profile, params.rho_min, params.delta_min);
  out.timings.labeling_seconds = watch.lap();
  return out;
}

}  // namespace dpc
