#pragma once

#include <atomic>
#include <limits>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "mapf/grid_map.hpp"

namespace mapf {

inline constexpr int32_t kUnreachable = std::numeric_limits<int32_t>::max();

// Shortest grid distance from every cell to a fixed goal. On obstacle-free
// maps the field is Manhattan distance, stored analytically so thousands of
// goals on a large map cost no memory.
class DistanceField {
 public:
  DistanceField(const GridMap& map, Cell goal);

  int32_t at(Cell c) const {
    if (analytic_) return std::abs(c.x - goal_.x) + std::abs(c.y - goal_.y);
    return dist_[static_cast<size_t>(c.y) * width_ + c.x];
  }
  bool reachable(Cell c) const { return at(c) != kUnreachable; }
  Cell goal() const { return goal_; }
  bool analytic() const { return analytic_; }

 private:
  Cell goal_;
  int32_t width_ = 0;
  bool analytic_ = false;
  std::vector<int32_t> dist_;
};

// Shared per-process cache keyed by map content and goal. Each field is
// computed exactly once; concurrent requests for distinct goals do not
// serialize on each other's BFS.
class FieldCache {
 public:
  std::shared_ptr<const DistanceField> get(const GridMap& map, Cell goal);

  size_t compute_count() const { return computes_.load(); }
  size_t size() const;
  void clear();

 private:
  struct Entry {
    std::once_flag once;
    std::shared_ptr<const DistanceField> field;
  };
  struct Key {
    uint64_t map_hash;
    Cell goal;
    bool operator==(const Key& o) const {
      return map_hash == o.map_hash && goal == o.goal;
    }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      uint64_t h = k.map_hash;
      h = fnv1a(&k.goal.x, sizeof(k.goal.x), h);
      h = fnv1a(&k.goal.y, sizeof(k.goal.y), h);
      return static_cast<size_t>(h);
    }
  };

  mutable std::mutex mu_;
  std::unordered_map<Key, std::shared_ptr<Entry>, KeyHash> entries_;
  std::atomic<size_t> computes_{0};
};

}  // namespace mapf
