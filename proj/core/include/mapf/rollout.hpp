#pragma once

#include "mapf/instance.hpp"
#include "mapf/policy.hpp"

namespace mapf {

struct RolloutLimits {
  size_t max_steps = 128;
  bool stop_when_solved = true;
};

// Closed-loop episode trace. histories[t] holds every agent's recent-action
// window as it stood at states[t], which is what an observation at that
// state needs.
struct Rollout {
  std::vector<Config> states;
  std::vector<std::vector<ActionHistory>> histories;
  std::vector<std::vector<Action>> executed;  // one entry per transition
  bool solved = false;
  size_t solved_at = 0;  // first timestep with every agent at its goal

  size_t horizon() const { return states.empty() ? 0 : states.size() - 1; }
};

Rollout run_rollout(const MAPFInstance& inst, Policy& policy,
                    FieldCache& cache, const RolloutLimits& limits,
                    uint64_t seed);

}  // namespace mapf
