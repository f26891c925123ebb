#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dpc/core.hpp"

namespace dpc {

// Turns a completed profile into a clustering. A point is noise iff it has a
// density below rho_min; centers are the non-noise points with delta >=
// delta_min. Labels flow from each center along reverse dependency edges and
// halt at noise, so non-noise points cut off behind a noise point stay
// unassigned. Points without a density (followers of the sampled variant)
// are never noise and never centers; they inherit whatever label reaches
// them through their dependent point.
inline Clustering assign_labels(const DensityProfile& profile, double rho_min,
                                double delta_min) {
  const std::size_t n = profile.size();
  Clustering out;
  out.labels.assign(n, kUnassigned);

  std::vector<char> noise(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (profile.has_rho(i) && profile.rho[i] < rho_min) {
      noise[i] = 1;
      out.labels[i] = kNoise;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!noise[i] && profile.has_rho(i) && profile.delta[i] >= delta_min)
      out.centers.push_back(static_cast<int>(i));
  }

  // Reverse dependency edges in CSR form.
  std::vector<int> head(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (profile.dep[i] >= 0) ++head[profile.dep[i] + 1];
  for (std::size_t i = 0; i < n; ++i) head[i + 1] += head[i];
  std::vector<int> child(head[n]);
  {
    std::vector<int> cursor(head.begin(), head.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
      if (profile.dep[i] >= 0) child[cursor[profile.dep[i]]++] = static_cast<int>(i);
  }

  // Every center roots its own cluster, so mark them all before any
  // propagation; a center inside another center's dependency subtree must
  // not be swallowed by it.
  for (int c : out.centers) out.labels[c] = c;
  std::vector<int> stack;
  for (int c : out.centers) {
    stack.push_back(c);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int e = head[u]; e < head[u + 1]; ++e) {
        const int v = child[e];
        if (noise[v] || out.labels[v] != kUnassigned) continue;
        out.labels[v] = out.labels[u];
        stack.push_back(v);
      }
    }
  }
  return out;
}

// Fraction of point pairs on which two labelings agree (same cluster in
// both, or different clusters in both). Noise and unassigned are ordinary
// label values here. Computed from the contingency table, so it runs in
// O(n) rather than over all pairs.
inline double rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("rand_index: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;

  std::unordered_map<int, int> ia, ib;
  std::vector<std::int64_t> row_sum, col_sum;
  auto compact = [](std::unordered_map<int, int>& m, std::vector<std::int64_t>& sums,
                    int label) {
    auto [it, fresh] = m.try_emplace(label, static_cast<int>(sums.size()));
    if (fresh) sums.push_back(0);
    ++sums[it->second];
    return it->second;
  };

  std::unordered_map<std::int64_t, std::int64_t> cell;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t ra = compact(ia, row_sum, a[i]);
    const std::int64_t rb = compact(ib, col_sum, b[i]);
    ++cell[ra * static_cast<std::int64_t>(n) + rb];
  }

  auto pairs2 = [](std::int64_t x) {
    return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1);
  };
  double same_same = 0.0;
  for (const auto& [key, count] : cell) same_same += pairs2(count);
  double rows = 0.0, cols = 0.0;
  for (std::int64_t v : row_sum) rows += pairs2(v);
  for (std::int64_t v : col_sum) cols += pairs2(v);

  const double all = pairs2(static_cast<std::int64_t>(n));
  return (all - rows - cols + 2.0 * same_same) / all;
}

}  // namespace dpc
