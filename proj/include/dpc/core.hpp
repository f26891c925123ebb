#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace dpc {

// Dependent distance carried by the global density peak; exports render it
// as "inf".
inline constexpr double kInfiniteDelta = std::numeric_limits<double>::max();

// Label values. Non-negative labels are cluster ids (the id of the cluster's
// center point).
inline constexpr int kNoise = -1;
inline constexpr int kUnassigned = -2;

// n points in d dimensions, stored flat. Point ids are 0..n-1 and double as
// indices into the coordinate array.
struct Dataset {
  int dim = 0;
  std::vector<double> coords;  // n * dim values

  std::size_t size() const { return dim > 0 ? coords.size() / dim : 0; }

  std::span<const double> point(std::size_t id) const {
    return {coords.data() + id * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }

  static Dataset from_rows(const std::vector<std::vector<double>>& rows) {
    Dataset out;
    if (rows.empty()) return out;
    out.dim = static_cast<int>(rows.front().size());
    if (out.dim == 0) throw std::invalid_argument("dataset rows must be non-empty");
    out.coords.reserve(rows.size() * out.dim);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != out.dim)
        throw std::invalid_argument("dataset rows differ in dimensionality");
      out.coords.insert(out.coords.end(), row.begin(), row.end());
    }
    return out;
  }
};

inline double distance_sq(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("distance: dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

// Euclidean distance.
inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(distance_sq(a, b));
}

// Deterministic density tie-breaker: each id maps to a distinct fraction in
// (0,1), so jittered densities are pairwise distinct and identical across
// runs, thread counts, and algorithms.
inline double jitter(std::int64_t base_count, std::int64_t id, std::int64_t n) {
  return static_cast<double>(base_count) +
         static_cast<double>(id + 1) / static_cast<double>(n + 1);
}

// Clustering parameters shared by all algorithms. delta_min must exceed
// d_cut so that a point whose dependent distance was assigned (rather than
// measured) as d_cut can never be mistaken for a center.
struct DpcParams {
  double d_cut = 0.0;
  double rho_min = 0.0;
  double delta_min = kInfiniteDelta;
  double epsilon = 0.0;  // cell granularity; only the sampled variant reads it
  int threads = 1;
  std::uint64_t seed = 0;  // generators only

  void validate() const {
    if (!(d_cut > 0.0)) throw std::invalid_argument("d_cut must be positive");
    if (!(delta_min > d_cut))
      throw std::invalid_argument("delta_min must exceed d_cut");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  }
};

// Per-point density and dependency data. rho is NaN for points the sampled
// variant never measures; the global density peak keeps dep == -1 and
// delta == kInfiniteDelta.
struct DensityProfile {
  std::vector<double> rho;
  std::vector<int> dep;
  std::vector<double> delta;

  std::size_t size() const { return rho.size(); }
  bool has_rho(std::size_t id) const { return !std::isnan(rho[id]); }

  static DensityProfile sized(std::size_t n) {
    DensityProfile p;
    p.rho.assign(n, std::numeric_limits<double>::quiet_NaN());
    p.dep.assign(n, -1);
    p.delta.assign(n, 0.0);
    return p;
  }
};

struct Clustering {
  std::vector<int> labels;   // cluster id, kNoise, or kUnassigned
  std::vector<int> centers;  // ascending point ids; labels[c] == c

  int cluster_count() const { return static_cast<int>(centers.size()); }

  std::size_t noise_count() const {
    std::size_t k = 0;
    for (int v : labels) k += (v == kNoise);
    return k;
  }
};

struct PhaseTimings {
  double density_seconds = 0.0;
  double dependency_seconds = 0.0;
  double labeling_seconds = 0.0;

  double total_seconds() const {
    return density_seconds + dependency_seconds + labeling_seconds;
  }
};

struct RunResult {
  DensityProfile profile;
  Clustering clustering;
  PhaseTimings timings;
};

// Monotonic per-phase stopwatch.
class Stopwatch {
 public:
  Stopwatch() : last_(std::chrono::steady_clock::now()) {}

  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_;
};

}  // namespace dpc
