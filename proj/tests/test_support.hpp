#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "dpc/core.hpp"

namespace test_support {

inline dpc::Dataset make_uniform(std::size_t n, int dim, std::uint64_t seed,
                                 double extent = 1000.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, extent);
  dpc::Dataset out;
  out.dim = dim;
  out.coords.resize(n * dim);
  for (double& v : out.coords) v = coord(rng);
  return out;
}

// Uniform points snapped to a coarse lattice: plenty of duplicate
// coordinates and exact distance ties.
inline dpc::Dataset make_lattice(std::size_t n, int dim, std::uint64_t seed,
                                 double extent = 1000.0, double cell = 100.0) {
  dpc::Dataset out = make_uniform(n, dim, seed, extent);
  for (double& v : out.coords) v = std::floor(v / cell) * cell;
  return out;
}

inline std::vector<int> brute_range(const dpc::Dataset& points,
                                    std::span<const double> q, double radius) {
  std::vector<int> out;
  const double r_sq = radius * radius;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (dpc::distance_sq(q, points.point(i)) < r_sq) out.push_back(static_cast<int>(i));
  return out;
}

inline int brute_nn(const dpc::Dataset& points, std::span<const double> q) {
  double best_d2 = std::numeric_limits<double>::infinity();
  int best = -1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d2 = dpc::distance_sq(q, points.point(i));
    if (d2 < best_d2 || (d2 == best_d2 && static_cast<int>(i) < best)) {
      best_d2 = d2;
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Element-wise equality where NaN (a point without a density) matches NaN.
inline bool same_rho(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i] && !(std::isnan(a[i]) && std::isnan(b[i]))) return false;
  return true;
}

// Nearest strictly denser point by (distance, id); -1 if none.
inline int brute_dependent(const dpc::Dataset& points, const std::vector<double>& rho,
                           int id, double* delta_out = nullptr) {
  double best_d2 = std::numeric_limits<double>::infinity();
  int best = -1;
  const auto p = points.point(id);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!(rho[j] > rho[id])) continue;
    const double d2 = dpc::distance_sq(p, points.point(j));
    if (d2 < best_d2 || (d2 == best_d2 && static_cast<int>(j) < best)) {
      best_d2 = d2;
      best = static_cast<int>(j);
    }
  }
  if (delta_out) *delta_out = best >= 0 ? std::sqrt(best_d2) : dpc::kInfiniteDelta;
  return best;
}

}  // namespace test_support
