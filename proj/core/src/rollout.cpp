#include "mapf/rollout.hpp"

#include "mapf/state.hpp"

namespace mapf {

Rollout run_rollout(const MAPFInstance& inst, Policy& policy,
                    FieldCache& cache, const RolloutLimits& limits,
                    uint64_t seed) {
  const size_t n = inst.num_agents();
  std::vector<std::shared_ptr<const DistanceField>> fields;
  fields.reserve(n);
  for (Cell g : inst.goals) fields.push_back(cache.get(inst.map, g));

  std::mt19937 rng(static_cast<uint32_t>(fnv1a(&seed, sizeof(seed))));
  policy.begin_episode(n);

  Rollout out;
  Config cur = inst.starts;
  std::vector<ActionHistory> hist(n, empty_history());
  out.states.push_back(cur);
  out.histories.push_back(hist);

  for (size_t t = 0; t < limits.max_steps; ++t) {
    if (!out.solved && all_at_goals(cur, inst.goals)) {
      out.solved = true;
      out.solved_at = t;
    }
    if (out.solved && limits.stop_when_solved) return out;
    DecisionContext ctx{inst.map, cur, inst.goals, hist, fields, rng};
    auto actions = policy.decide(ctx);
    StepResult r = step(inst.map, cur, actions, StepMode::Execute);
    for (size_t i = 0; i < n; ++i) push_action(hist[i], r.executed[i]);
    cur = std::move(r.next);
    out.executed.push_back(std::move(r.executed));
    out.states.push_back(cur);
    out.histories.push_back(hist);
  }
  if (!out.solved && all_at_goals(cur, inst.goals)) {
    out.solved = true;
    out.solved_at = out.horizon();
  }
  return out;
}

}  // namespace mapf
