#pragma once

#include "mapf/instance_gen.hpp"
#include "mapf/rollout.hpp"
#include "mapf/trainer.hpp"

namespace mapf {

enum class Termination { AllAtGoals, StepLimit };

const char* to_string(Termination t);

struct EpisodeResult {
  std::string instance_id;
  MapKind kind = MapKind::Random;
  Termination termination = Termination::StepLimit;
  size_t steps_used = 0;
  size_t num_agents = 0;
  size_t agents_at_goal = 0;
  size_t soc = 0;  // of the realized trajectory
  std::optional<size_t> expert_soc;
  double soc_ratio = -1;  // -1 when the centralized solve failed
  int64_t wall_ms = 0;
  double mean_decision_us = 0;  // averaged over every (agent, step) decision
};

struct SuiteItem {
  MapKind kind = MapKind::Random;
  size_t agents = 8;
  uint64_t seed = 0;
  size_t step_limit = 128;
};

struct SuiteSpec {
  std::vector<SuiteItem> items;
  SolverBudget expert_budget{10'000, 0};
};

struct MapTypeAggregate {
  MapKind kind;
  size_t episodes = 0;
  double success_rate = 0;
  double success_ci_low = 0, success_ci_high = 0;
  double independent_success_rate = 0;
  double mean_soc_ratio = 0;  // over episodes with a centralized solution
  double ratio_ci_low = 0, ratio_ci_high = 0;
  size_t ratio_excluded = 0;
};

struct SuiteReport {
  std::vector<EpisodeResult> episodes;   // sorted by instance id
  std::vector<MapTypeAggregate> aggregates;  // one row per map type
};

// Rolls the policy out on every item, scores the realized trajectory, and
// compares its cost against an accurate-budget centralized solve. Episodes
// whose centralized solve fails are excluded from ratio aggregation.
SuiteReport run_suite(Policy& policy, const SuiteSpec& spec,
                      FieldCache& cache);

// Canonical evaluation mix over the four map families.
SuiteSpec default_suite(size_t episodes_per_kind, size_t agents,
                        uint64_t seed);

struct BenchRow {
  size_t agents = 0;
  size_t steps = 0;
  size_t agents_at_goal = 0;
  double independent_success_rate = 0;
  int64_t total_ms = 0;
  double mean_decision_us = 0;
};

// One episode per agent count on an empty side x side map; start/goal pairs
// are random with Manhattan distance in [1, distance_cap].
std::vector<BenchRow> scalability_bench(Policy& policy, int32_t side,
                                        const std::vector<size_t>& agent_counts,
                                        int distance_cap, size_t step_limit,
                                        uint64_t seed, FieldCache& cache);

// Least-squares diagnostics for the bench table: R^2 of total time against
// agent count and the relative spread of per-agent decision time.
struct ScalingFit {
  double r_squared = 0;
  double decision_spread = 0;  // (max - min) / min over mean decision times
};
ScalingFit fit_scaling(const std::vector<BenchRow>& rows);

// Runs the same loop once per mode from identical seeds and base params.
std::vector<std::pair<TrainMode, LoopResult>> ablation_run(
    const PolicyParams& base, const std::vector<Sample>& expert,
    const std::vector<Sample>& validation,
    const std::vector<MAPFInstance>& probes, const LoopConfig& base_cfg,
    const std::vector<TrainMode>& modes, FieldCache& cache);

// CSV renderings; byte-stable for identical inputs.
std::string episodes_csv(const SuiteReport& report);
std::string aggregates_csv(const SuiteReport& report);
std::string bench_csv(const std::vector<BenchRow>& rows);
std::string curves_csv(
    const std::vector<std::pair<TrainMode, LoopResult>>& runs);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mapf
