#include "mapf/pibt.hpp"

#include <algorithm>
#include <numeric>

namespace mapf {

namespace {
constexpr int16_t kNone = -1;
constexpr size_t kMaxPibtAgents = 32767;  // ids live in int16 slots
}  // namespace

// Occupancy entries are (now, next) int16 pairs in one array laid out in
// 8x8 tiles, so one agent's whole move neighborhood usually sits on one or
// two cache lines. That keeps per-agent planning cost flat on big maps with
// tens of thousands of agents.
size_t PibtStepper::tile_index(Cell c) const {
  size_t tile = (static_cast<size_t>(c.y) >> 3) * tiles_x_ +
                (static_cast<size_t>(c.x) >> 3);
  return (tile << 6) | ((static_cast<size_t>(c.y) & 7) << 3) |
         (static_cast<size_t>(c.x) & 7);
}

PibtStepper::PibtStepper(
    const GridMap& map,
    std::vector<std::shared_ptr<const DistanceField>> fields)
    : map_(map), fields_(std::move(fields)) {
  tiles_x_ = (static_cast<size_t>(map_.width) + 7) / 8;
  size_t tiles_y = (static_cast<size_t>(map_.height) + 7) / 8;
  occ_.assign(tiles_x_ * tiles_y * 64 * 2, kNone);
  // compact per-agent goal table; dodges a pointer chase per candidate when
  // the field is plain Manhattan distance
  analytic_goal_.assign(fields_.size(), Cell{-1, -1});
  for (size_t i = 0; i < fields_.size(); ++i)
    if (fields_[i]->analytic()) analytic_goal_[i] = fields_[i]->goal();
}

std::optional<Config> PibtStepper::build(
    const Config& now, const std::vector<std::pair<size_t, Cell>>& constraints,
    const std::vector<size_t>& order, std::mt19937* tiebreak_rng) {
  const size_t n = now.size();
  if (n > kMaxPibtAgents)
    throw InstanceTooLargeError("pibt supports at most 32767 agents");
  next_.assign(n, Cell{});
  planned_.assign(n, 0);
  std::vector<size_t> touched;
  touched.reserve(2 * n);

  for (size_t i = 0; i < n; ++i) {
    if (i + 8 < n) __builtin_prefetch(&occ_[2 * tile_index(now[i + 8])], 1);
    occ_[2 * tile_index(now[i])] = static_cast<int16_t>(i);
  }

  bool ok = true;
  for (const auto& [a, cell] : constraints) {
    if (!map_.passable(cell) ||
        (cell != now[a] && manhattan(cell, now[a]) != 1)) {
      ok = false;
      break;
    }
    size_t idx = tile_index(cell);
    if (occ_[2 * idx + 1] != kNone) {
      ok = false;
      break;
    }
    int16_t b = occ_[2 * idx];
    if (b != kNone && static_cast<size_t>(b) != a && planned_[b] &&
        next_[b] == now[a]) {
      ok = false;  // swap between two constrained agents
      break;
    }
    occ_[2 * idx + 1] = static_cast<int16_t>(a);
    touched.push_back(idx);
    next_[a] = cell;
    planned_[a] = 1;
  }

  if (ok) {
    // plan_agent appends its reservations to touched via the member alias
    touched_ = &touched;
    for (size_t j = 0; j < order.size(); ++j) {
      // two-stage software pipeline: pull the agent position first, then its
      // occupancy neighborhood, so the planning loop rarely waits on memory
      if (j + 12 < order.size()) __builtin_prefetch(&now[order[j + 12]]);
      if (j + 6 < order.size()) {
        const size_t b = order[j + 6];
        const Cell c = now[b];
        const int16_t* p = &occ_[2 * tile_index(c)];
        __builtin_prefetch(p - 16);
        __builtin_prefetch(p + 16);
        __builtin_prefetch(&analytic_goal_[b]);
        __builtin_prefetch(&next_[b], 1);
        // move-neighborhood rows that land in an adjacent tile
        if ((c.y & 7) == 0 && c.y > 0)
          __builtin_prefetch(&occ_[2 * tile_index(Cell{c.x, c.y - 1})]);
        else if ((c.y & 7) == 7 && c.y + 1 < map_.height)
          __builtin_prefetch(&occ_[2 * tile_index(Cell{c.x, c.y + 1})]);
        if ((c.x & 7) == 0 && c.x > 0)
          __builtin_prefetch(&occ_[2 * tile_index(Cell{c.x - 1, c.y})]);
        else if ((c.x & 7) == 7 && c.x + 1 < map_.width)
          __builtin_prefetch(&occ_[2 * tile_index(Cell{c.x + 1, c.y})]);
      }
      size_t a = order[j];
      if (planned_[a]) continue;
      if (!plan_agent(a, now[a], tiebreak_rng, false) && !planned_[a]) {
        // could not even stay put (a constrained agent claimed the cell)
        ok = false;
        break;
      }
    }
    touched_ = nullptr;
  }

  std::optional<Config> result;
  if (ok) result = Config(next_.begin(), next_.end());

  for (size_t i = 0; i < n; ++i) {
    if (i + 8 < n) __builtin_prefetch(&occ_[2 * tile_index(now[i + 8])], 1);
    occ_[2 * tile_index(now[i])] = kNone;
  }
  for (size_t i = 0; i < touched.size(); ++i) {
    if (i + 8 < touched.size())
      __builtin_prefetch(&occ_[2 * touched[i + 8]], 1);
    occ_[2 * touched[i] + 1] = kNone;
  }
  return result;
}

bool PibtStepper::plan_agent(size_t ai, Cell pos, std::mt19937* tiebreak_rng,
                             bool parent_holds_self) {
  struct Cand {
    Cell cell;
    int64_t dist;
    uint32_t tie;
  };
  Cand cands[kNumActions];
  int m = 0;
  const Cell agoal = analytic_goal_[ai];
  const DistanceField* field = agoal.x < 0 ? fields_[ai].get() : nullptr;
  for (int a = 0; a < kNumActions; ++a) {
    Cell u = apply_action(pos, static_cast<Action>(a));
    if (!map_.passable(u)) continue;
    int64_t d = field ? field->at(u) : manhattan(u, agoal);
    uint32_t tie =
        tiebreak_rng ? (*tiebreak_rng)() : static_cast<uint32_t>(a);
    cands[m++] = Cand{u, d, tie};
  }
  std::sort(cands, cands + m, [](const Cand& a, const Cand& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.tie < b.tie;
  });

  for (int k = 0; k < m; ++k) {
    Cell u = cands[k].cell;
    size_t idx = tile_index(u);
    if (occ_[2 * idx + 1] != kNone) continue;
    int16_t ak = occ_[2 * idx];
    if (ak != kNone && planned_[ak] && next_[ak] == pos) continue;
    occ_[2 * idx + 1] = static_cast<int16_t>(ai);
    touched_->push_back(idx);
    next_[ai] = u;
    planned_[ai] = 1;
    if (ak != kNone && static_cast<size_t>(ak) != ai && !planned_[ak]) {
      // the displaced occupant sits exactly on the cell just reserved
      if (!plan_agent(static_cast<size_t>(ak), u, tiebreak_rng, true)) {
        // the failing child parked on idx and now holds the reservation
        if (occ_[2 * idx + 1] == static_cast<int16_t>(ai))
          occ_[2 * idx + 1] = kNone;
        planned_[ai] = 0;
        continue;
      }
    }
    return true;
  }

  // Nothing worked: park in place. A recursing parent holds our cell's
  // reservation and is about to back off, so we take it over; anyone else
  // holding it (a constrained agent) is a hard failure.
  size_t self = tile_index(pos);
  if (occ_[2 * self + 1] != kNone && !parent_holds_self) return false;
  occ_[2 * self + 1] = static_cast<int16_t>(ai);
  touched_->push_back(self);
  next_[ai] = pos;
  planned_[ai] = 1;
  return false;
}

std::vector<size_t> priority_order(
    const Config& config,
    const std::vector<std::shared_ptr<const DistanceField>>& fields) {
  std::vector<size_t> order(config.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<int64_t> dist(config.size());
  for (size_t i = 0; i < config.size(); ++i)
    dist[i] = fields[i]->at(config[i]);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return dist[a] != dist[b] ? dist[a] > dist[b] : a < b;
  });
  return order;
}

void PibtPolicy::begin_episode(size_t num_agents) {
  priority_.assign(num_agents, 0);
  stepper_.reset();
  bound_map_ = nullptr;
}

std::vector<Action> PibtPolicy::decide(const DecisionContext& ctx) {
  const size_t n = ctx.config.size();
  if (priority_.size() != n) priority_.assign(n, 0);
  if (!stepper_ || bound_map_ != &ctx.map) {
    stepper_ = std::make_unique<PibtStepper>(ctx.map, ctx.fields);
    bound_map_ = &ctx.map;
  }

  int64_t max_p = 0;
  for (size_t i = 0; i < n; ++i) {
    if (ctx.config[i] == ctx.goals[i])
      priority_[i] = 0;
    else
      max_p = std::max(max_p, ++priority_[i]);
  }
  // counting sort, highest priority first, index order within a bucket
  std::vector<size_t> bucket_start(static_cast<size_t>(max_p) + 2, 0);
  for (size_t i = 0; i < n; ++i)
    ++bucket_start[static_cast<size_t>(max_p - priority_[i])];
  size_t acc = 0;
  for (size_t& b : bucket_start) {
    size_t c = b;
    b = acc;
    acc += c;
  }
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i)
    order[bucket_start[static_cast<size_t>(max_p - priority_[i])]++] = i;

  std::vector<Action> actions(n, Action::Wait);
  auto next = stepper_->build(ctx.config, {}, order, &ctx.rng);
  if (next)
    for (size_t i = 0; i < n; ++i)
      actions[i] = action_between(ctx.config[i], (*next)[i]);
  return actions;
}

}  // namespace mapf
