#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapf/instance.hpp"
#include "mapf/state.hpp"

namespace mapf {

// A plan as a sequence of joint configurations, states[0] being the start.
struct Solution {
  std::vector<Config> states;

  size_t length() const { return states.size(); }
  // Number of transitions, i.e. the last timestep index.
  size_t horizon() const { return states.empty() ? 0 : states.size() - 1; }
};

struct ValidationResult {
  bool ok = true;
  std::string reason;
};

// Checks starts, goal arrival at the end, move legality (stay or one step to
// a passable cell), and absence of vertex/edge conflicts throughout.
ValidationResult validate_solution(const MAPFInstance& inst,
                                   const Solution& sol);

// Per-agent cost: the first timestep after which the agent sits at its goal
// through the end of the plan. An agent not at its goal in the final state
// costs the full horizon.
std::vector<size_t> solution_costs(const std::vector<Cell>& goals,
                                   const Solution& sol);

size_t sum_of_costs(const std::vector<Cell>& goals, const Solution& sol);
size_t makespan(const Solution& sol);

}  // namespace mapf
