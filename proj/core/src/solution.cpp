#include "mapf/solution.hpp"

namespace mapf {

ValidationResult validate_solution(const MAPFInstance& inst,
                                   const Solution& sol) {
  auto fail = [](std::string why) {
    return ValidationResult{false, std::move(why)};
  };
  if (sol.states.empty()) return fail("empty solution");
  const size_t n = inst.num_agents();
  for (const auto& c : sol.states)
    if (c.size() != n) return fail("configuration arity mismatch");
  if (sol.states.front() != inst.starts)
    return fail("solution does not begin at the start configuration");
  if (!all_at_goals(sol.states.back(), inst.goals))
    return fail("solution does not end with all agents at goals");

  for (size_t t = 0; t < sol.states.size(); ++t) {
    const auto& c = sol.states[t];
    for (size_t i = 0; i < n; ++i)
      if (!inst.map.passable(c[i]))
        return fail("agent " + std::to_string(i) + " on blocked cell at t=" +
                    std::to_string(t));
    if (!find_vertex_conflicts(c).empty())
      return fail("vertex conflict at t=" + std::to_string(t));
    if (t + 1 < sol.states.size()) {
      const auto& nx = sol.states[t + 1];
      for (size_t i = 0; i < n; ++i) {
        if (c[i] != nx[i] && manhattan(c[i], nx[i]) != 1)
          return fail("agent " + std::to_string(i) + " teleports at t=" +
                      std::to_string(t));
      }
      if (!find_edge_conflicts(c, nx).empty())
        return fail("edge conflict at t=" + std::to_string(t));
    }
  }
  return ValidationResult{};
}

std::vector<size_t> solution_costs(const std::vector<Cell>& goals,
                                   const Solution& sol) {
  const size_t n = goals.size();
  const size_t T = sol.horizon();
  std::vector<size_t> costs(n, T);
  for (size_t i = 0; i < n; ++i) {
    if (sol.states.empty() || sol.states.back()[i] != goals[i]) continue;
    size_t t = T;
    while (t > 0 && sol.states[t - 1][i] == goals[i]) --t;
    costs[i] = t;
  }
  return costs;
}

size_t sum_of_costs(const std::vector<Cell>& goals, const Solution& sol) {
  size_t total = 0;
  for (size_t c : solution_costs(goals, sol)) total += c;
  return total;
}

size_t makespan(const Solution& sol) { return sol.horizon(); }

}  // namespace mapf
