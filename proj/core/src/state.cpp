#include "mapf/state.hpp"

#include <unordered_map>

namespace mapf {

std::vector<VertexConflict> find_vertex_conflicts(const Config& c) {
  std::vector<VertexConflict> out;
  std::unordered_map<Cell, size_t> first;
  for (size_t i = 0; i < c.size(); ++i) {
    auto [it, inserted] = first.try_emplace(c[i], i);
    if (!inserted) out.push_back(VertexConflict{it->second, i, c[i]});
  }
  return out;
}

std::vector<EdgeConflict> find_edge_conflicts(const Config& prev,
                                              const Config& next) {
  std::vector<EdgeConflict> out;
  for (size_t i = 0; i < prev.size(); ++i) {
    for (size_t j = i + 1; j < prev.size(); ++j) {
      if (prev[i] == next[j] && prev[j] == next[i] && prev[i] != prev[j])
        out.push_back(EdgeConflict{i, j});
    }
  }
  return out;
}

bool all_at_goals(const Config& c, const std::vector<Cell>& goals) {
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] != goals[i]) return false;
  return true;
}

StepResult step(const GridMap& map, const Config& current,
                const std::vector<Action>& actions, StepMode mode) {
  if (actions.size() != current.size())
    throw ArityMismatchError("step: " + std::to_string(actions.size()) +
                             " actions for " + std::to_string(current.size()) +
                             " agents");
  const size_t n = current.size();
  StepResult r;
  r.executed = actions;
  r.next.resize(n);

  for (size_t i = 0; i < n; ++i) {
    Cell to = apply_action(current[i], actions[i]);
    if (!map.passable(to)) {
      r.report.obstacle_violations.push_back(i);
      r.executed[i] = Action::Wait;
      to = current[i];
    }
    r.next[i] = to;
  }

  if (mode == StepMode::Raw) {
    r.report.vertex_conflicts = find_vertex_conflicts(r.next);
    r.report.edge_conflicts = find_edge_conflicts(current, r.next);
    return r;
  }

  // Execute: demote every agent involved in a conflict to Wait and repeat
  // until the joint move is clean. Terminates because the set of moving
  // agents shrinks each round, and an all-wait move has no conflicts.
  auto demote = [&](size_t i) {
    if (r.next[i] != current[i]) {
      r.executed[i] = Action::Wait;
      r.next[i] = current[i];
    }
  };
  for (;;) {
    auto vcs = find_vertex_conflicts(r.next);
    auto ecs = find_edge_conflicts(current, r.next);
    if (vcs.empty() && ecs.empty()) break;
    for (const auto& vc : vcs) {
      demote(vc.agent_a);
      demote(vc.agent_b);
    }
    for (const auto& ec : ecs) {
      demote(ec.agent_a);
      demote(ec.agent_b);
    }
    r.report.vertex_conflicts.insert(r.report.vertex_conflicts.end(),
                                     vcs.begin(), vcs.end());
    r.report.edge_conflicts.insert(r.report.edge_conflicts.end(), ecs.begin(),
                                   ecs.end());
  }
  return r;
}

}  // namespace mapf
