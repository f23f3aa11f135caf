#pragma once

#include <optional>

#include "mapf/dataset.hpp"
#include "mapf/instance_gen.hpp"
#include "mapf/rollout.hpp"
#include "mapf/solver.hpp"

namespace mapf {

inline constexpr int64_t kDeltaInf = INT64_MAX;

struct DdgConfig {
  size_t probe_stride = 16;   // gap between probed rollout states
  size_t harvest_len = 32;    // expert-plan prefix length turned into samples
  int64_t delta_min = 3;      // a state is picked only if its delta exceeds this
  size_t num_agents = 32;
  double random_map_fraction = 0.1;  // remainder are mazes
  int32_t map_side = 0;              // 0 = draw per instance
  size_t episode_limit = 128;
  size_t generation_target = 409'600;  // samples per generation phase
  size_t max_episodes = 4096;          // phase safety stop
  // settled agents contribute wait-at-goal samples; without them a trained
  // policy never learns to hold its goal
  bool harvest_include_settled = true;
  SolverBudget probe_budget{2000, 0};
  SolverBudget accurate_budget{10'000, 0};
};

struct PhaseStats {
  size_t episodes = 0;
  size_t candidates = 0;
  size_t probe_calls = 0;     // approximate-budget suffix solves
  size_t accurate_calls = 0;  // accurate-budget solves (= expert_calls)
  size_t expert_calls = 0;    // harvest-producing expert invocations
  size_t failed_probes = 0;
  size_t failed_expert = 0;
  size_t selections = 0;
  size_t no_selection = 0;
  size_t samples_added = 0;
  int64_t selected_delta_sum = 0;  // finite selected deltas only
  size_t selected_delta_inf = 0;   // selections with the infinite sentinel
  int64_t probe_wall_ms = 0;
  int64_t expert_wall_ms = 0;
  int64_t wall_ms = 0;

  double hit_rate() const {
    return episodes ? static_cast<double>(selections) / episodes : 0.0;
  }
  double mean_selected_delta() const {
    size_t finite = selections - selected_delta_inf;
    return finite ? static_cast<double>(selected_delta_sum) / finite : 0.0;
  }
};

// Rollout timesteps to probe: every stride-th index strictly before the
// final state.
std::vector<size_t> extract_candidates(size_t horizon, size_t stride);

// One consecutive candidate pair: suffix costs from both states and their
// difference. A failed right-side solve with a solved left side reads as an
// infinite jump; a failed left side leaves the delta undefined.
struct DeltaRecord {
  size_t index = 0;  // position of the left candidate
  SolveStatus status_left = SolveStatus::Timeout;
  SolveStatus status_right = SolveStatus::Timeout;
  std::optional<int64_t> cost_left;
  std::optional<int64_t> cost_right;
  std::optional<int64_t> delta;  // kDeltaInf = infinite sentinel
};

// Solves the suffix instance at every candidate timestep with the probe
// budget and pairs up consecutive costs. Fewer than two candidates yield an
// empty list. `stats`, when given, is charged for the solver calls.
std::vector<DeltaRecord> probe_deltas(const MAPFInstance& inst,
                                      const std::vector<Config>& states,
                                      const std::vector<size_t>& candidates,
                                      const SolverBudget& budget,
                                      FieldCache& cache,
                                      PhaseStats* stats = nullptr);

std::vector<std::optional<int64_t>> compute_deltas(
    const std::vector<std::optional<int64_t>>& costs);

// Largest defined delta, earliest index on ties; nothing unless it strictly
// exceeds delta_min.
std::optional<size_t> select_state(const std::vector<DeltaRecord>& records,
                                   int64_t delta_min);
std::optional<size_t> select_delta(
    const std::vector<std::optional<int64_t>>& deltas, int64_t delta_min);

// Turns the prefix of an expert plan into samples: for each of the first
// min(k, plan length) transitions, every agent contributes its observation
// and the expert's action (agents already settled on their goals are skipped
// unless include_settled). Histories are replayed from the plan itself, so
// the samples are self-contained.
std::vector<Sample> harvest(const MAPFInstance& inst, const Solution& sol,
                            size_t k, bool include_settled, FieldCache& cache,
                            uint32_t timestep_base, uint32_t phase);

// One data-generation phase: roll the policy out, probe suffix costs at the
// candidate states, re-solve accurately where the cost jumps, and bank the
// expert prefix. Stops at the sample target or the episode cap.
PhaseStats run_generation_phase(Policy& policy, const DdgConfig& cfg,
                                FieldCache& cache, SampleRing& ring,
                                uint64_t phase_seed, uint32_t phase_index);

// Ablation baseline: relabel every stride-th visited state with one expert
// call and keep only that state's samples.
PhaseStats run_dagger_phase(Policy& policy, const DdgConfig& cfg,
                            FieldCache& cache, SampleRing& ring,
                            uint64_t phase_seed, uint32_t phase_index);

}  // namespace mapf
