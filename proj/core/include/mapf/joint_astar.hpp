#pragma once

#include "mapf/instance.hpp"
#include "mapf/solution.hpp"
#include "mapf/solver.hpp"

namespace mapf {

// Exhaustive A* over joint configurations; returns a provably optimal
// sum-of-costs plan. Exponential in the number of agents, so inputs are
// capped hard: at most `max_agents` agents and `max_cells` free map area.
// Used as the reference the fast solver is checked against.
struct JointAStarLimits {
  size_t max_agents = 4;
  size_t max_cells = 36;
  size_t max_horizon = 128;
  uint64_t max_expansions = 2'000'000;
  // Branch-and-bound mode: ignore anything costing this much or more. An
  // Unsolvable result then means "nothing strictly cheaper exists", which
  // proves an incumbent of exactly this cost optimal.
  uint64_t cost_upper_bound = UINT64_MAX;
  int64_t time_limit_ms = 0;  // 0 = unbounded
};

SolveResult joint_astar(const MAPFInstance& inst,
                        const JointAStarLimits& limits = {});

}  // namespace mapf
