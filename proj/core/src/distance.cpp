#include "mapf/distance.hpp"

#include <deque>

namespace mapf {

DistanceField::DistanceField(const GridMap& map, Cell goal)
    : goal_(goal), width_(map.width) {
  if (!map.passable(goal))
    throw GoalBlockedError("distance field goal is blocked or out of bounds");
  if (map.all_free()) {
    analytic_ = true;
    return;
  }
  dist_.assign(map.size(), kUnreachable);
  std::deque<Cell> queue;
  dist_[map.index(goal)] = 0;
  queue.push_back(goal);
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    int32_t d = dist_[map.index(c)];
    for (int a = 0; a < kNumActions - 1; ++a) {
      Cell nb{c.x + kActionDx[a], c.y + kActionDy[a]};
      if (!map.passable(nb)) continue;
      auto& slot = dist_[map.index(nb)];
      if (slot != kUnreachable) continue;
      slot = d + 1;
      queue.push_back(nb);
    }
  }
}

std::shared_ptr<const DistanceField> FieldCache::get(const GridMap& map,
                                                     Cell goal) {
  Key key{map.content_hash(), goal};
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = entries_[key];
    if (!slot) slot = std::make_shared<Entry>();
    entry = slot;
  }
  std::call_once(entry->once, [&] {
    entry->field = std::make_shared<const DistanceField>(map, goal);
    computes_.fetch_add(1);
  });
  return entry->field;
}

size_t FieldCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

void FieldCache::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.clear();
}

}  // namespace mapf
