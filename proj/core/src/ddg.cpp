#include "mapf/ddg.hpp"

#include "mapf/observation.hpp"

namespace mapf {

std::vector<size_t> extract_candidates(size_t horizon, size_t stride) {
  std::vector<size_t> out;
  if (stride == 0) throw SpecInvalidError("probe stride must be positive");
  for (size_t t = 0; t < horizon; t += stride) out.push_back(t);
  return out;
}

std::vector<std::optional<int64_t>> compute_deltas(
    const std::vector<std::optional<int64_t>>& costs) {
  std::vector<std::optional<int64_t>> deltas;
  if (costs.size() < 2) return deltas;
  deltas.reserve(costs.size() - 1);
  for (size_t i = 0; i + 1 < costs.size(); ++i) {
    if (!costs[i].has_value())
      deltas.emplace_back(std::nullopt);
    else if (!costs[i + 1].has_value())
      deltas.emplace_back(kDeltaInf);
    else
      deltas.emplace_back(*costs[i + 1] - *costs[i]);
  }
  return deltas;
}

std::optional<size_t> select_delta(
    const std::vector<std::optional<int64_t>>& deltas, int64_t delta_min) {
  std::optional<size_t> best;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (!deltas[i].has_value()) continue;
    if (!best.has_value() || *deltas[i] > *deltas[*best]) best = i;
  }
  if (best.has_value() && *deltas[*best] > delta_min) return best;
  return std::nullopt;
}

std::optional<size_t> select_state(const std::vector<DeltaRecord>& records,
                                   int64_t delta_min) {
  std::vector<std::optional<int64_t>> deltas;
  deltas.reserve(records.size());
  for (const auto& r : records) deltas.push_back(r.delta);
  return select_delta(deltas, delta_min);
}

std::vector<Sample> harvest(const MAPFInstance& inst, const Solution& sol,
                            size_t k, bool include_settled, FieldCache& cache,
                            uint32_t timestep_base, uint32_t phase) {
  const size_t n = inst.num_agents();
  std::vector<std::shared_ptr<const DistanceField>> fields;
  fields.reserve(n);
  for (Cell g : inst.goals) fields.push_back(cache.get(inst.map, g));

  std::vector<size_t> costs = solution_costs(inst.goals, sol);
  std::vector<ActionHistory> hist(n, empty_history());
  std::vector<Sample> out;

  const size_t steps = std::min(k, sol.horizon());
  for (size_t t = 0; t < steps; ++t) {
    const Config& cur = sol.states[t];
    const Config& nxt = sol.states[t + 1];
    for (size_t i = 0; i < n; ++i) {
      if (!include_settled && t >= costs[i]) continue;
      Sample s;
      Observation obs =
          build_observation(inst.map, cur, inst.goals, hist, *fields[i], i);
      s.tokens = tokenize(obs);
      s.action = static_cast<uint8_t>(action_between(cur[i], nxt[i]));
      s.instance_seed = inst.seed;
      s.timestep = timestep_base + static_cast<uint32_t>(t);
      s.agent = static_cast<uint32_t>(i);
      s.phase = phase;
      out.push_back(s);
    }
    for (size_t i = 0; i < n; ++i)
      push_action(hist[i], action_between(cur[i], nxt[i]));
  }
  return out;
}

namespace {

uint64_t draw_seed(std::mt19937& rng) {
  return (static_cast<uint64_t>(rng()) << 32) | rng();
}

struct TimedSolve {
  SolveResult result;
  int64_t wall_ms;
};

TimedSolve timed_solve(const MAPFInstance& inst, const SolverBudget& budget,
                       FieldCache& cache) {
  Deadline timer(0);
  SolveResult r = solve(inst, budget, cache);
  return TimedSolve{std::move(r), timer.elapsed_ms()};
}

}  // namespace

std::vector<DeltaRecord> probe_deltas(const MAPFInstance& inst,
                                      const std::vector<Config>& states,
                                      const std::vector<size_t>& candidates,
                                      const SolverBudget& budget,
                                      FieldCache& cache, PhaseStats* stats) {
  if (candidates.size() < 2) return {};

  std::vector<SolveStatus> status(candidates.size());
  std::vector<std::optional<int64_t>> costs(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    auto probe =
        timed_solve(sub_instance(inst, states[candidates[i]]), budget, cache);
    status[i] = probe.result.status;
    if (probe.result.status == SolveStatus::Solved)
      costs[i] = static_cast<int64_t>(probe.result.sum_of_costs);
    if (stats) {
      ++stats->probe_calls;
      stats->probe_wall_ms += probe.wall_ms;
      if (probe.result.status != SolveStatus::Solved) ++stats->failed_probes;
    }
  }

  auto deltas = compute_deltas(costs);
  std::vector<DeltaRecord> records(deltas.size());
  for (size_t i = 0; i < deltas.size(); ++i) {
    records[i] = DeltaRecord{i,        status[i],    status[i + 1],
                             costs[i], costs[i + 1], deltas[i]};
  }
  return records;
}

PhaseStats run_generation_phase(Policy& policy, const DdgConfig& cfg,
                                FieldCache& cache, SampleRing& ring,
                                uint64_t phase_seed, uint32_t phase_index) {
  PhaseStats stats;
  Deadline phase_timer(0);
  std::mt19937 rng(static_cast<uint32_t>(fnv1a(&phase_seed, sizeof(phase_seed))));

  while (stats.samples_added < cfg.generation_target &&
         stats.episodes < cfg.max_episodes) {
    ++stats.episodes;
    MapKind kind = training_map_kind(rng, cfg.random_map_fraction);
    MAPFInstance inst =
        generate_instance(kind, cfg.num_agents, draw_seed(rng), cfg.map_side);

    Rollout ro = run_rollout(inst, policy, cache,
                             RolloutLimits{cfg.episode_limit, true},
                             inst.seed);

    auto cand = extract_candidates(ro.horizon(), cfg.probe_stride);
    stats.candidates += cand.size();

    auto records =
        probe_deltas(inst, ro.states, cand, cfg.probe_budget, cache, &stats);
    auto z = select_state(records, cfg.delta_min);
    if (!z.has_value()) {
      ++stats.no_selection;
      continue;
    }
    ++stats.selections;
    if (records[*z].delta == kDeltaInf)
      ++stats.selected_delta_inf;
    else
      stats.selected_delta_sum += *records[*z].delta;

    size_t t_z = cand[*z];
    auto accurate = timed_solve(sub_instance(inst, ro.states[t_z]),
                                cfg.accurate_budget, cache);
    ++stats.accurate_calls;
    ++stats.expert_calls;
    stats.expert_wall_ms += accurate.wall_ms;
    if (accurate.result.status != SolveStatus::Solved) {
      ++stats.failed_expert;
      continue;
    }

    auto samples = harvest(sub_instance(inst, ro.states[t_z]),
                           accurate.result.solution, cfg.harvest_len,
                           cfg.harvest_include_settled, cache,
                           static_cast<uint32_t>(t_z), phase_index);
    ring.add(samples);
    stats.samples_added += samples.size();
  }
  stats.wall_ms = phase_timer.elapsed_ms();
  return stats;
}

PhaseStats run_dagger_phase(Policy& policy, const DdgConfig& cfg,
                            FieldCache& cache, SampleRing& ring,
                            uint64_t phase_seed, uint32_t phase_index) {
  PhaseStats stats;
  Deadline phase_timer(0);
  std::mt19937 rng(static_cast<uint32_t>(fnv1a(&phase_seed, sizeof(phase_seed))));

  while (stats.samples_added < cfg.generation_target &&
         stats.episodes < cfg.max_episodes) {
    ++stats.episodes;
    MapKind kind = training_map_kind(rng, cfg.random_map_fraction);
    MAPFInstance inst =
        generate_instance(kind, cfg.num_agents, draw_seed(rng), cfg.map_side);

    Rollout ro = run_rollout(inst, policy, cache,
                             RolloutLimits{cfg.episode_limit, true},
                             inst.seed);

    auto cand = extract_candidates(ro.horizon(), cfg.probe_stride);
    stats.candidates += cand.size();
    for (size_t t : cand) {
      auto expert = timed_solve(sub_instance(inst, ro.states[t]),
                                cfg.accurate_budget, cache);
      ++stats.accurate_calls;
      ++stats.expert_calls;
      stats.expert_wall_ms += expert.wall_ms;
      if (expert.result.status != SolveStatus::Solved) {
        ++stats.failed_expert;
        continue;
      }
      auto samples = harvest(sub_instance(inst, ro.states[t]),
                             expert.result.solution, 1,
                             cfg.harvest_include_settled, cache,
                             static_cast<uint32_t>(t), phase_index);
      ring.add(samples);
      stats.samples_added += samples.size();
      if (stats.samples_added >= cfg.generation_target) break;
    }
  }
  stats.wall_ms = phase_timer.elapsed_ms();
  return stats;
}

}  // namespace mapf
