#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "dpc/core.hpp"

namespace dpc {

// Synthetic data lives in [0, 1e5] per dimension.
inline constexpr double kDomainMax = 1e5;

namespace detail {

// Derived from the raw engine output so the stream stays identical across
// standard-library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

struct GaussianMixture {
  Dataset points;
  std::vector<int> truth;                    // generating cluster per point
  std::vector<std::vector<double>> centers;  // k cluster centers
};

// k isotropic Gaussian blobs around uniform centers; points are dealt to the
// blobs round-robin so blob sizes differ by at most one. Same seed, same
// dataset.
inline GaussianMixture generate_gaussian(int k, std::size_t n, int dim, double spread,
                                         std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("generate_gaussian: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw std::invalid_argument("generate_gaussian: n must be >= k");
  if (dim < 1) throw std::invalid_argument("generate_gaussian: dim must be >= 1");
  std::mt19937_64 rng(seed);
  GaussianMixture out;
  out.centers.assign(k, std::vector<double>(dim));
  for (auto& c : out.centers)
    for (double& v : c) v = detail::uniform01(rng) * kDomainMax;

  out.points.dim = dim;
  out.points.coords.reserve(n * dim);
  out.truth.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int cluster = static_cast<int>(i % k);
    for (int d = 0; d < dim; ++d)
      out.points.coords.push_back(out.centers[cluster][d] +
                                  spread * detail::standard_normal(rng));
    out.truth.push_back(cluster);
  }
  return out;
}

// Random-walk trajectory with occasional restarts, clamped to the domain.
// Produces trails of strongly varying local density.
inline Dataset generate_random_walk(std::size_t n, int dim, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_random_walk: n must be >= 1");
  if (dim < 1) throw std::invalid_argument("generate_random_walk: dim must be >= 1");
  constexpr double kStep = 200.0;
  constexpr double kRestartProbability = 1e-4;

  std::mt19937_64 rng(seed);
  Dataset out;
  out.dim = dim;
  out.coords.reserve(n * dim);
  std::vector<double> pos(dim);
  for (double& v : pos) v = detail::uniform01(rng) * kDomainMax;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      if (detail::uniform01(rng) < kRestartProbability) {
        for (double& v : pos) v = detail::uniform01(rng) * kDomainMax;
      } else {
        for (double& v : pos) {
          v += (2.0 * detail::uniform01(rng) - 1.0) * kStep;
          v = std::clamp(v, 0.0, kDomainMax);
        }
      }
    }
    out.coords.insert(out.coords.end(), pos.begin(), pos.end());
  }
  return out;
}

}  // namespace dpc
