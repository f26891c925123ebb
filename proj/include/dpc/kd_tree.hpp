#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "dpc/core.hpp"

namespace dpc {

// Balanced kd-tree over low-dimensional points. Supports strict-radius range
// search, nearest-neighbor search with id tie-breaking, and incremental
// insertion. All points live in leaf buckets; internal nodes split on the
// widest-spread dimension at build time. Inserts descend to a leaf and a
// subtree is rebuilt whenever its size exceeds twice the size it had when
// last built, which keeps lookups logarithmic without full rebuilds.
//
// Queries are safe from any number of threads concurrently; insert requires
// exclusive access.
class KdTree {
 public:
  explicit KdTree(int dim, int leaf_size = 16) : dim_(dim), leaf_size_(leaf_size) {
    if (dim_ < 1) throw std::invalid_argument("KdTree: dim must be >= 1");
    if (leaf_size_ < 1) throw std::invalid_argument("KdTree: leaf_size must be >= 1");
  }

  explicit KdTree(const Dataset& points, int leaf_size = 16)
      : KdTree(points.dim > 0 ? points.dim : 1, leaf_size) {
    std::vector<int> ids(points.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    bulk_load(points, ids);
  }

  KdTree(const Dataset& points, std::span<const int> ids, int leaf_size = 16)
      : KdTree(points.dim > 0 ? points.dim : 1, leaf_size) {
    bulk_load(points, ids);
  }

  int dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }

  void insert(int id, std::span<const double> coords) {
    if (static_cast<int>(coords.size()) != dim_)
      throw std::invalid_argument("KdTree::insert: dimension mismatch");
    if (!present_.insert(id).second)
      throw std::invalid_argument("KdTree::insert: duplicate id");
    const int slot = static_cast<int>(ids_.size());
    ids_.push_back(id);
    coords_.insert(coords_.end(), coords.begin(), coords.end());

    if (!root_) {
      root_ = std::make_unique<Node>();
      root_->bucket.push_back(slot);
      root_->size = root_->built_size = 1;
      return;
    }
    path_.clear();
    Node* cur = root_.get();
    while (!cur->leaf()) {
      path_.push_back(cur);
      ++cur->size;
      cur = goes_left(coords, id, *cur) ? cur->left.get() : cur->right.get();
    }
    path_.push_back(cur);
    ++cur->size;
    cur->bucket.push_back(slot);
    if (static_cast<int>(cur->bucket.size()) > leaf_size_) {
      scratch_ = cur->bucket;
      build_into(*cur, scratch_);
    }
    // Rebuild the topmost subtree that has outgrown its balanced size.
    for (Node* nd : path_) {
      if (nd->size > 2 * nd->built_size) {
        scratch_.clear();
        collect_slots(*nd, scratch_);
        build_into(*nd, scratch_);
        break;
      }
    }
  }

  // Ids of stored points with distance(q, p) < radius. closed widens the
  // predicate to <= for callers that need boundary points kept. Result order
  // follows the traversal, not id order.
  std::vector<int> range_search(std::span<const double> q, double radius,
                                bool closed = false) const {
    check_query(q);
    std::vector<int> out;
    if (!root_) return out;
    std::vector<double> off(dim_, 0.0);
    range_node(*root_, q.data(), radius * radius, closed, off, &out, nullptr);
    return out;
  }

  // Number of stored points with distance(q, p) < radius; avoids
  // materializing the id list.
  std::size_t range_count(std::span<const double> q, double radius,
                          bool closed = false) const {
    check_query(q);
    std::size_t count = 0;
    if (!root_) return count;
    std::vector<double> off(dim_, 0.0);
    range_node(*root_, q.data(), radius * radius, closed, off, nullptr, &count);
    return count;
  }

  // Stored point minimizing (distance, id); nullopt iff the tree is empty.
  std::optional<int> nearest_neighbor(std::span<const double> q) const {
    check_query(q);
    if (!root_) return std::nullopt;
    double best_d2 = std::numeric_limits<double>::infinity();
    int best_id = std::numeric_limits<int>::max();
    std::vector<double> off(dim_, 0.0);
    nn_node(*root_, q.data(), off, best_d2, best_id);
    return best_id;
  }

 private:
  struct Node {
    int split_dim = -1;  // -1 marks a leaf
    double split_val = 0.0;
    int split_id = -1;  // id tie-break for points on the split plane
    std::unique_ptr<Node> left, right;
    std::vector<int> bucket;  // leaf payload: slot indices
    int size = 0;
    int built_size = 0;

    bool leaf() const { return split_dim < 0; }
  };

  void check_query(std::span<const double> q) const {
    if (static_cast<int>(q.size()) != dim_)
      throw std::invalid_argument("KdTree: query dimension mismatch");
  }

  const double* slot_coords(int slot) const {
    return coords_.data() + static_cast<std::size_t>(slot) * dim_;
  }

  double slot_dist_sq(const double* q, int slot) const {
    const double* p = slot_coords(slot);
    double acc = 0.0;
    for (int k = 0; k < dim_; ++k) {
      const double diff = q[k] - p[k];
      acc += diff * diff;
    }
    return acc;
  }

  bool goes_left(std::span<const double> coords, int id, const Node& node) const {
    const double c = coords[node.split_dim];
    return c < node.split_val || (c == node.split_val && id < node.split_id);
  }

  void bulk_load(const Dataset& points, std::span<const int> ids) {
    ids_.reserve(ids.size());
    coords_.reserve(ids.size() * dim_);
    present_.reserve(ids.size() * 2);
    std::vector<int> slots(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const int id = ids[i];
      if (!present_.insert(id).second)
        throw std::invalid_argument("KdTree: duplicate id");
      auto p = points.point(id);
      ids_.push_back(id);
      coords_.insert(coords_.end(), p.begin(), p.end());
      slots[i] = static_cast<int>(i);
    }
    if (!slots.empty()) {
      root_ = std::make_unique<Node>();
      build_into(*root_, slots);
    }
  }

  void build_into(Node& node, std::span<int> slots) {
    node.size = node.built_size = static_cast<int>(slots.size());
    node.left.reset();
    node.right.reset();
    node.bucket.clear();
    if (static_cast<int>(slots.size()) <= leaf_size_) {
      node.split_dim = -1;
      node.bucket.assign(slots.begin(), slots.end());
      return;
    }
    const int dim = widest_dim(slots);
    const std::size_t mid = slots.size() / 2;
    std::nth_element(slots.begin(), slots.begin() + mid, slots.end(),
                     [&](int a, int b) {
                       const double ca = slot_coords(a)[dim];
                       const double cb = slot_coords(b)[dim];
                       return ca < cb || (ca == cb && ids_[a] < ids_[b]);
                     });
    node.split_dim = dim;
    node.split_val = slot_coords(slots[mid])[dim];
    node.split_id = ids_[slots[mid]];
    node.left = std::make_unique<Node>();
    node.right = std::make_unique<Node>();
    build_into(*node.left, slots.subspan(0, mid));
    build_into(*node.right, slots.subspan(mid));
  }

  int widest_dim(std::span<const int> slots) const {
    int best = 0;
    double best_spread = -1.0;
    for (int k = 0; k < dim_; ++k) {
      double lo = slot_coords(slots[0])[k], hi = lo;
      for (int s : slots) {
        const double v = slot_coords(s)[k];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best = k;
      }
    }
    return best;
  }

  void collect_slots(const Node& node, std::vector<int>& out) const {
    if (node.leaf()) {
      out.insert(out.end(), node.bucket.begin(), node.bucket.end());
      return;
    }
    collect_slots(*node.left, out);
    collect_slots(*node.right, out);
  }

  // Squared distance from q to the region described by the per-dimension
  // offsets, summed in dimension order. Summing the same way the point
  // distances are summed keeps the bound <= every in-region point distance
  // under rounding, so pruning on it never drops a boundary tie.
  double region_dist_sq(const std::vector<double>& off) const {
    double acc = 0.0;
    for (int k = 0; k < dim_; ++k) acc += off[k] * off[k];
    return acc;
  }

  void range_node(const Node& node, const double* q, double r_sq, bool closed,
                  std::vector<double>& off, std::vector<int>* out,
                  std::size_t* count) const {
    if (node.leaf()) {
      for (int slot : node.bucket) {
        const double d2 = slot_dist_sq(q, slot);
        if (closed ? d2 <= r_sq : d2 < r_sq) {
          if (out) out->push_back(ids_[slot]);
          if (count) ++*count;
        }
      }
      return;
    }
    const double diff = q[node.split_dim] - node.split_val;
    const Node* near = diff < 0.0 ? node.left.get() : node.right.get();
    const Node* far = diff < 0.0 ? node.right.get() : node.left.get();
    range_node(*near, q, r_sq, closed, off, out, count);
    const double old = off[node.split_dim];
    off[node.split_dim] = diff;
    const double bound = region_dist_sq(off);
    if (closed ? bound <= r_sq : bound < r_sq)
      range_node(*far, q, r_sq, closed, off, out, count);
    off[node.split_dim] = old;
  }

  void nn_node(const Node& node, const double* q, std::vector<double>& off,
               double& best_d2, int& best_id) const {
    if (node.leaf()) {
      for (int slot : node.bucket) {
        const double d2 = slot_dist_sq(q, slot);
        const int id = ids_[slot];
        if (d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
          best_d2 = d2;
          best_id = id;
        }
      }
      return;
    }
    const double diff = q[node.split_dim] - node.split_val;
    const Node* near = diff < 0.0 ? node.left.get() : node.right.get();
    const Node* far = diff < 0.0 ? node.right.get() : node.left.get();
    nn_node(*near, q, off, best_d2, best_id);
    const double old = off[node.split_dim];
    off[node.split_dim] = diff;
    // <= keeps equal-distance candidates reachable for the id tie-break.
    if (region_dist_sq(off) <= best_d2)
      nn_node(*far, q, off, best_d2, best_id);
    off[node.split_dim] = old;
  }

  int dim_;
  int leaf_size_;
  std::vector<double> coords_;  // slot-major storage
  std::vector<int> ids_;        // slot -> point id
  std::unordered_set<int> present_;
  std::unique_ptr<Node> root_;
  std::vector<Node*> path_;    // insert scratch
  std::vector<int> scratch_;   // rebuild scratch
};

}  // namespace dpc
