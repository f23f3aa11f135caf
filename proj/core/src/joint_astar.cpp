#include "mapf/joint_astar.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <queue>
#include <unordered_map>

#include "mapf/distance.hpp"

namespace mapf {

namespace {

// A settled agent sits on its goal and never moves again; everyone else
// pays one cost unit per timestep. Settling is a free self-edge, so the
// accumulated g of a goal state is exactly the sum of costs: each agent is
// charged every step before the one where it parks for good.
struct Node {
  Config config;
  uint32_t mask = 0;  // bit i = agent i settled
  uint32_t depth = 0;  // joint moves taken from the start
  size_t parent = SIZE_MAX;
  uint64_t g = 0;
  uint64_t f = 0;
};

struct KeyHash {
  size_t operator()(const std::pair<Config, uint32_t>& k) const {
    uint64_t h = fnv1a(k.first.data(), k.first.size() * sizeof(Cell));
    h = fnv1a(&k.second, sizeof(k.second), h);
    return static_cast<size_t>(h);
  }
};

}  // namespace

SolveResult joint_astar(const MAPFInstance& inst,
                        const JointAStarLimits& limits) {
  inst.validate();
  const size_t n = inst.num_agents();
  if (n > limits.max_agents || n > 31)
    throw InstanceTooLargeError("joint A* capped at " +
                                std::to_string(limits.max_agents) +
                                " agents, got " + std::to_string(n));
  if (inst.map.free_cells() > limits.max_cells)
    throw InstanceTooLargeError("joint A* capped at " +
                                std::to_string(limits.max_cells) +
                                " free cells, got " +
                                std::to_string(inst.map.free_cells()));

  Deadline timer(limits.time_limit_ms);
  SolveResult res;

  std::vector<DistanceField> fields;
  fields.reserve(n);
  for (Cell g : inst.goals) fields.emplace_back(inst.map, g);
  for (size_t i = 0; i < n; ++i) {
    if (!fields[i].reachable(inst.starts[i])) {
      res.status = SolveStatus::Unsolvable;
      res.elapsed_ms = timer.elapsed_ms();
      return res;
    }
  }

  const uint32_t full = (uint32_t{1} << n) - 1;

  auto heuristic = [&](const Config& c, uint32_t mask) {
    uint64_t h = 0;
    for (size_t i = 0; i < n; ++i)
      if (!(mask >> i & 1)) h += static_cast<uint64_t>(fields[i].at(c[i]));
    return h;
  };

  std::deque<Node> arena;
  using Key = std::pair<Config, uint32_t>;
  std::unordered_map<Key, uint64_t, KeyHash> best_g;
  // (f, g, node index); larger g first among equal f reaches goals sooner
  using QEntry = std::tuple<uint64_t, uint64_t, size_t>;
  auto cmp = [](const QEntry& a, const QEntry& b) {
    if (std::get<0>(a) != std::get<0>(b))
      return std::get<0>(a) > std::get<0>(b);
    return std::get<1>(a) < std::get<1>(b);
  };
  std::priority_queue<QEntry, std::vector<QEntry>, decltype(cmp)> open(cmp);

  auto push = [&](Node&& node) {
    node.f = node.g + heuristic(node.config, node.mask);
    if (node.f >= limits.cost_upper_bound) return;
    auto [it, inserted] = best_g.try_emplace({node.config, node.mask}, node.g);
    if (!inserted && it->second <= node.g) return;
    it->second = node.g;
    arena.push_back(std::move(node));
    open.emplace(arena.back().f, arena.back().g, arena.size() - 1);
  };

  {
    Node init;
    init.config = inst.starts;
    push(std::move(init));
  }

  uint64_t expansions = 0;
  bool horizon_pruned = false;

  std::vector<std::vector<Cell>> moves(n);
  std::vector<size_t> pick(n);

  while (!open.empty()) {
    auto [f, g, idx] = open.top();
    open.pop();
    Config cur_config = arena[idx].config;
    const uint32_t cur_mask = arena[idx].mask;
    const uint32_t cur_depth = arena[idx].depth;
    auto dom = best_g.find({cur_config, cur_mask});
    if (dom != best_g.end() && dom->second < g) continue;

    if (cur_mask == full) {
      Solution sol;
      for (size_t p = idx; p != SIZE_MAX; p = arena[p].parent)
        sol.states.push_back(arena[p].config);
      std::reverse(sol.states.begin(), sol.states.end());
      // free settle edges duplicate the configuration; drop the copies
      sol.states.erase(std::unique(sol.states.begin(), sol.states.end()),
                       sol.states.end());
      res.status = SolveStatus::Solved;
      res.solution = std::move(sol);
      res.sum_of_costs = static_cast<size_t>(g);
      res.makespan = res.solution.horizon();
      res.proven_optimal = true;
      res.nodes_expanded = expansions;
      res.elapsed_ms = timer.elapsed_ms();
      return res;
    }

    if (++expansions > limits.max_expansions ||
        ((expansions & 1023) == 0 && timer.expired())) {
      res.status = SolveStatus::Timeout;
      res.nodes_expanded = expansions;
      res.elapsed_ms = timer.elapsed_ms();
      return res;
    }

    // free settle edges for agents parked on their goals
    for (size_t i = 0; i < n; ++i) {
      if ((cur_mask >> i & 1) || cur_config[i] != inst.goals[i]) continue;
      Node child;
      child.config = cur_config;
      child.mask = cur_mask | (uint32_t{1} << i);
      child.depth = cur_depth;
      child.parent = idx;
      child.g = g;
      push(std::move(child));
    }

    if (cur_depth + 1 > limits.max_horizon) {
      horizon_pruned = true;
      continue;
    }

    for (size_t i = 0; i < n; ++i) {
      moves[i].clear();
      if (cur_mask >> i & 1) {
        moves[i].push_back(cur_config[i]);
        continue;
      }
      for (int a = 0; a < kNumActions; ++a) {
        Cell u = apply_action(cur_config[i], static_cast<Action>(a));
        if (inst.map.passable(u)) moves[i].push_back(u);
      }
    }

    const uint64_t step_cost =
        static_cast<uint64_t>(n) - std::popcount(cur_mask);

    // Cartesian product over per-agent moves.
    std::fill(pick.begin(), pick.end(), 0);
    for (;;) {
      Config next(n);
      for (size_t i = 0; i < n; ++i) next[i] = moves[i][pick[i]];

      bool clean = find_vertex_conflicts(next).empty() &&
                   find_edge_conflicts(cur_config, next).empty();
      if (clean) {
        Node child;
        child.config = std::move(next);
        child.mask = cur_mask;
        child.depth = cur_depth + 1;
        child.parent = idx;
        child.g = g + step_cost;
        push(std::move(child));
      }

      size_t d = 0;
      while (d < n && ++pick[d] == moves[d].size()) {
        pick[d] = 0;
        ++d;
      }
      if (d == n) break;
    }
  }

  res.status = horizon_pruned ? SolveStatus::Timeout : SolveStatus::Unsolvable;
  res.nodes_expanded = expansions;
  res.elapsed_ms = timer.elapsed_ms();
  return res;
}

}  // namespace mapf
