#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

namespace dpc {

struct CostedTask {
  int id = 0;
  double cost = 0.0;  // estimated work units, >= 0
};

// LPT greedy assignment: tasks sorted by descending cost (ties by id) are
// placed one at a time on the currently least-loaded thread (ties on the
// lowest thread index). Returns the task ids per thread.
inline std::vector<std::vector<int>> greedy_partition(std::span<const CostedTask> tasks,
                                                      int threads) {
  if (threads < 1) throw std::invalid_argument("greedy_partition: threads must be >= 1");
  std::vector<std::vector<int>> out(threads);

  std::vector<int> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return tasks[a].cost > tasks[b].cost ||
           (tasks[a].cost == tasks[b].cost && tasks[a].id < tasks[b].id);
  });

  using Load = std::pair<double, int>;  // (assigned cost, thread index)
  std::priority_queue<Load, std::vector<Load>, std::greater<>> loads;
  for (int t = 0; t < threads; ++t) loads.emplace(0.0, t);
  for (int i : order) {
    auto [load, t] = loads.top();
    loads.pop();
    out[t].push_back(tasks[i].id);
    loads.emplace(load + tasks[i].cost, t);
  }
  return out;
}

inline double partition_makespan(const std::vector<std::vector<int>>& partition,
                                 std::span<const CostedTask> tasks) {
  std::vector<double> by_id;
  for (const auto& t : tasks) {
    if (t.id >= static_cast<int>(by_id.size())) by_id.resize(t.id + 1, 0.0);
    by_id[t.id] = t.cost;
  }
  double worst = 0.0;
  for (const auto& bucket : partition) {
    double sum = 0.0;
    for (int id : bucket) sum += by_id[id];
    worst = std::max(worst, sum);
  }
  return worst;
}

// Estimated cost of resolving one point against s density-ordered subsets of
// n/s points each: candidate_subsets may hold the dependent point, and at
// most one of them straddles the point's density (a full scan instead of a
// tree lookup).
inline double cost_dep(double n, double s, int dim, int candidate_subsets,
                       bool has_mixed_subset) {
  if (candidate_subsets <= 0) return 0.0;
  const double per_tree = std::pow(n / s, 1.0 - 1.0 / static_cast<double>(dim));
  return has_mixed_subset ? n / s + (candidate_subsets - 1) * per_tree
                          : candidate_subsets * per_tree;
}

// Dynamic pull: workers claim the next unprocessed index from a shared
// cursor. fn(i) must write only to slots owned by task i, so the output is
// independent of the thread count.
template <class Fn>
void parallel_for_dynamic(std::size_t count, int threads, Fn&& fn) {
  if (threads < 1) throw std::invalid_argument("parallel_for_dynamic: threads must be >= 1");
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Executes a greedy-partitioned assignment: thread t runs fn over its own
// task list, in list order.
template <class Fn>
void run_partition(const std::vector<std::vector<int>>& assignment, Fn&& fn) {
  if (assignment.size() <= 1) {
    for (const auto& bucket : assignment)
      for (int id : bucket) fn(id);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(assignment.size());
  for (const auto& bucket : assignment)
    pool.emplace_back([&fn, &bucket] {
      for (int id : bucket) fn(id);
    });
  for (auto& th : pool) th.join();
}

}  // namespace dpc
