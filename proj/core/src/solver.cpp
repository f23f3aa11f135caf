#include "mapf/solver.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "mapf/joint_astar.hpp"
#include "mapf/pibt.hpp"

namespace mapf {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return "Solved";
    case SolveStatus::Timeout:
      return "Timeout";
    case SolveStatus::Unsolvable:
      return "Unsolvable";
  }
  return "?";
}

namespace {

struct ConfigHash {
  size_t operator()(const Config& c) const {
    uint64_t h = kFnvOffset;
    h = fnv1a(c.data(), c.size() * sizeof(Cell), h);
    return static_cast<size_t>(h);
  }
};

struct LowNode {
  LowNode* parent;
  size_t agent;
  Cell where;
  uint32_t depth;
};

struct HighNode {
  Config config;
  HighNode* parent = nullptr;
  uint64_t g = 0;
  uint64_t h = 0;
  // steps since each agent last sat on its goal, inherited along the tree;
  // giving the longest-stuck agent the right of way dissolves the corridor
  // standoffs that a fixed order never resolves
  std::vector<int32_t> stuck;
  std::vector<size_t> order;
  std::deque<LowNode*> tree;
  std::vector<HighNode*> neighbors;

  uint64_t f() const { return g + h; }
};

// Per-transition cost: agents parked at their goal on both ends ride free.
// This undercounts the true sum of costs of a completion, never overcounts,
// so pruning on g + h against an incumbent sum of costs is safe.
uint64_t edge_loss(const Config& a, const Config& b,
                   const std::vector<Cell>& goals) {
  uint64_t loss = 0;
  for (size_t i = 0; i < goals.size(); ++i)
    loss += !(a[i] == goals[i] && b[i] == goals[i]);
  return loss;
}

enum class RoundOutcome { Exhausted, OutOfBudget };

struct Search {
  const MAPFInstance& inst;
  PibtStepper& pibt;
  const std::vector<std::shared_ptr<const DistanceField>>& fields;
  const Deadline& deadline;
  uint64_t node_limit;
  uint64_t& nodes;
  uint64_t bound;  // prune f >= bound; UINT64_MAX = unbounded
  std::mt19937* rng;

  std::deque<HighNode> hnodes;
  std::deque<LowNode> lnodes;
  std::unordered_map<Config, HighNode*, ConfigHash> explored;
  std::vector<HighNode*> open;
  HighNode* closest = nullptr;  // lowest h discovered so far

  uint64_t heuristic(const Config& c) const {
    uint64_t h = 0;
    for (size_t i = 0; i < c.size(); ++i) h += fields[i]->at(c[i]);
    return h;
  }

  HighNode* make_node(Config c, HighNode* parent, uint64_t g) {
    hnodes.push_back(HighNode{});
    HighNode* n = &hnodes.back();
    n->h = heuristic(c);
    n->config = std::move(c);
    n->parent = parent;
    n->g = g;
    const size_t m = n->config.size();
    n->stuck.resize(m);
    for (size_t i = 0; i < m; ++i) {
      if (n->config[i] == inst.goals[i])
        n->stuck[i] = 0;
      else
        n->stuck[i] = parent ? parent->stuck[i] + 1 : 1;
    }
    std::vector<int64_t> dist(m);
    for (size_t i = 0; i < m; ++i) dist[i] = fields[i]->at(n->config[i]);
    n->order.resize(m);
    std::iota(n->order.begin(), n->order.end(), size_t{0});
    std::sort(n->order.begin(), n->order.end(), [&](size_t a, size_t b) {
      if (n->stuck[a] != n->stuck[b]) return n->stuck[a] > n->stuck[b];
      if (dist[a] != dist[b]) return dist[a] > dist[b];
      return a < b;
    });
    lnodes.push_back(LowNode{nullptr, 0, Cell{}, 0});
    n->tree.push_back(&lnodes.back());
    explored.emplace(n->config, n);
    if (!closest || n->h < closest->h) closest = n;
    return n;
  }

  // Dijkstra-style relaxation across already discovered transitions; every
  // improved node goes back on the stack so the bound check sees the new g.
  void relax(HighNode* start) {
    std::vector<HighNode*> queue{start};
    while (!queue.empty()) {
      HighNode* u = queue.back();
      queue.pop_back();
      for (HighNode* v : u->neighbors) {
        uint64_t ng = u->g + edge_loss(u->config, v->config, inst.goals);
        if (ng < v->g) {
          v->g = ng;
          v->parent = u;
          queue.push_back(v);
          open.push_back(v);
        }
      }
    }
  }

  Solution extract(HighNode* goal_node) const {
    Solution sol;
    for (HighNode* p = goal_node; p != nullptr; p = p->parent)
      sol.states.push_back(p->config);
    std::reverse(sol.states.begin(), sol.states.end());
    return sol;
  }

  // Keeps searching after the goal config is first reached: relaxation keeps
  // rewiring parent pointers, so the incumbent path can shorten before the
  // round ends. *out is filled iff a goal was reached this round.
  RoundOutcome run(Solution* out) {
    const size_t n = inst.num_agents();
    open.push_back(make_node(inst.starts, nullptr, 0));
    Solution incumbent;
    uint64_t incumbent_cost = UINT64_MAX;
    auto wrap = [&](RoundOutcome oc) {
      if (incumbent_cost != UINT64_MAX) *out = std::move(incumbent);
      return oc;
    };
    size_t iter = 0;
    while (!open.empty()) {
      if ((++iter & 63) == 0) {
        if (deadline.expired()) return wrap(RoundOutcome::OutOfBudget);
        // revisit the closest approach so its alternatives keep getting
        // tried; a pure stack tends to wander off near-goal plateaus
        if (closest && !closest->tree.empty() && closest->f() < bound)
          open.push_back(closest);
      }
      if (node_limit && nodes >= node_limit)
        return wrap(RoundOutcome::OutOfBudget);

      HighNode* S = open.back();
      if (S->f() >= bound) {
        open.pop_back();
        continue;
      }
      if (all_at_goals(S->config, inst.goals)) {
        // the transition loss undercounts agents that leave their goal again,
        // so judge and prune on the extracted path's actual cost, not on g
        Solution sol = extract(S);
        uint64_t soc = sum_of_costs(inst.goals, sol);
        if (soc < incumbent_cost) {
          incumbent_cost = soc;
          incumbent = std::move(sol);
        }
        bound = std::min(bound, incumbent_cost);
        open.pop_back();
        continue;
      }

      // burn through this node's constraint tree until it yields a
      // configuration not seen before; pausing on repeats turns the search
      // into a random walk over explored ground
      bool descended = false;
      while (!S->tree.empty()) {
        if ((++iter & 63) == 0 && deadline.expired())
          return wrap(RoundOutcome::OutOfBudget);
        if (node_limit && nodes >= node_limit)
          return wrap(RoundOutcome::OutOfBudget);

        LowNode* constraint = S->tree.front();
        S->tree.pop_front();
        if (constraint->depth < n) {
          size_t agent = S->order[constraint->depth];
          for (int a = 0; a < kNumActions; ++a) {
            Cell u = apply_action(S->config[agent], static_cast<Action>(a));
            if (!inst.map.passable(u)) continue;
            lnodes.push_back(
                LowNode{constraint, agent, u, constraint->depth + 1});
            S->tree.push_back(&lnodes.back());
          }
        }

        std::vector<std::pair<size_t, Cell>> pins;
        for (LowNode* p = constraint; p->depth > 0; p = p->parent)
          pins.emplace_back(p->agent, p->where);

        ++nodes;
        auto next = pibt.build(S->config, pins, S->order, rng);
        if (!next) continue;

        uint64_t ng = S->g + edge_loss(S->config, *next, inst.goals);
        auto it = explored.find(*next);
        if (it == explored.end()) {
          HighNode* N = make_node(std::move(*next), S, ng);
          S->neighbors.push_back(N);
          open.push_back(N);
          descended = true;
          break;
        }
        HighNode* N = it->second;
        S->neighbors.push_back(N);
        if (ng < N->g) {
          N->g = ng;
          N->parent = S;
          // back on the stack: it may have been discarded under a stale
          // cost estimate, with its constraint tree still unburned
          open.push_back(N);
          relax(N);
        }
      }
      if (!descended && S->tree.empty() && !open.empty() && open.back() == S)
        open.pop_back();
    }
    return wrap(RoundOutcome::Exhausted);
  }
};

uint32_t round_seed(uint64_t seed, uint32_t round) {
  uint64_t h = fnv1a(&seed, sizeof(seed));
  h = fnv1a(&round, sizeof(round), h);
  return static_cast<uint32_t>(h ^ (h >> 32));
}

}  // namespace

SolveResult solve(const MAPFInstance& inst, const SolverBudget& budget,
                  FieldCache& cache) {
  if (budget.time_limit_ms <= 0 && budget.node_limit == 0)
    throw SpecInvalidError("solver budget must bound time or nodes");
  inst.validate();

  Deadline deadline(budget.time_limit_ms);
  SolveResult res;

  std::vector<std::shared_ptr<const DistanceField>> fields;
  fields.reserve(inst.num_agents());
  for (Cell g : inst.goals) fields.push_back(cache.get(inst.map, g));

  for (size_t i = 0; i < inst.num_agents(); ++i) {
    if (!fields[i]->reachable(inst.starts[i])) {
      res.status = SolveStatus::Unsolvable;
      res.elapsed_ms = deadline.elapsed_ms();
      return res;
    }
  }

  PibtStepper pibt(inst.map, fields);
  uint64_t nodes = 0;
  size_t best = SIZE_MAX;
  Solution best_sol;
  bool proven = false;
  bool unsolvable = false;

  // Small joint spaces get a closing branch-and-bound pass that certifies or
  // beats whatever the rounds produced, so part of the budget is held back.
  bool polishable = false;
  if (inst.num_agents() <= 4) {
    double states = 1;
    for (size_t i = 0; i < inst.num_agents(); ++i)
      states *= static_cast<double>(inst.map.free_cells());
    polishable = inst.map.free_cells() <= 64 && states <= double{1 << 23};
  }
  uint64_t rounds_node_limit = budget.node_limit;
  if (polishable && budget.node_limit)
    rounds_node_limit -= std::min<uint64_t>(budget.node_limit / 2, 600'000);
  Deadline rounds_deadline(polishable && budget.time_limit_ms > 0
                               ? (budget.time_limit_ms + 1) / 2
                               : budget.time_limit_ms);

  // Rounds are capped well below the total budget: a fresh tie stream is
  // often worth more than pushing one deep search further, so a stuck round
  // gets cut off and restarted instead of draining the whole allowance. The
  // cap doubles each round so late rounds can still exhaust small spaces.
  for (uint32_t round = 0;; ++round) {
    if (rounds_deadline.expired() ||
        (budget.node_limit && nodes >= rounds_node_limit))
      break;
    uint64_t node_stop = nodes + (uint64_t{50'000} << std::min(round, 7u));
    if (budget.node_limit) node_stop = std::min(node_stop, rounds_node_limit);
    std::mt19937 rng(round_seed(inst.seed, round));
    Search search{inst,
                  pibt,
                  fields,
                  rounds_deadline,
                  node_stop,
                  nodes,
                  best == SIZE_MAX ? UINT64_MAX : best,
                  round == 0 ? nullptr : &rng};
    Solution sol;
    RoundOutcome outcome = search.run(&sol);
    if (!sol.states.empty()) {
      size_t soc = sum_of_costs(inst.goals, sol);
      if (soc < best) {
        if (best != SIZE_MAX) ++res.improvements;
        best = soc;
        best_sol = std::move(sol);
      }
    }
    if (outcome == RoundOutcome::Exhausted) {
      // every config with estimated cost below the incumbent has been tried
      if (best == SIZE_MAX)
        unsolvable = true;
      else
        proven = true;
      break;
    }
  }

  if (polishable && !proven && !unsolvable && !deadline.expired() &&
      !(budget.node_limit && nodes >= budget.node_limit)) {
    JointAStarLimits lim;
    lim.max_agents = 4;
    lim.max_cells = 64;
    lim.max_horizon = std::numeric_limits<uint32_t>::max();
    lim.max_expansions = 500'000;
    if (budget.node_limit)
      lim.max_expansions =
          std::min(lim.max_expansions, budget.node_limit - nodes);
    lim.cost_upper_bound = best == SIZE_MAX ? UINT64_MAX : best;
    if (budget.time_limit_ms > 0)
      lim.time_limit_ms =
          std::max<int64_t>(budget.time_limit_ms - deadline.elapsed_ms(), 1);
    SolveResult exact = joint_astar(inst, lim);
    nodes += exact.nodes_expanded;
    if (exact.status == SolveStatus::Solved) {
      if (best != SIZE_MAX) ++res.improvements;
      best = exact.sum_of_costs;
      best_sol = std::move(exact.solution);
      proven = true;
    } else if (exact.status == SolveStatus::Unsolvable) {
      // nothing cheaper than the incumbent exists, or nothing at all
      if (best == SIZE_MAX)
        unsolvable = true;
      else
        proven = true;
    }
  }

  res.nodes_expanded = nodes;
  res.elapsed_ms = deadline.elapsed_ms();
  if (best != SIZE_MAX) {
    res.status = SolveStatus::Solved;
    res.solution = std::move(best_sol);
    res.sum_of_costs = best;
    res.makespan = res.solution.horizon();
    res.proven_optimal = proven;
  } else {
    res.status =
        unsolvable ? SolveStatus::Unsolvable : SolveStatus::Timeout;
  }
  return res;
}

MAPFInstance sub_instance(const MAPFInstance& base, const Config& from) {
  MAPFInstance inst;
  inst.map = base.map;
  inst.starts = from;
  inst.goals = base.goals;
  inst.seed = base.seed;
  return inst;
}

}  // namespace mapf
