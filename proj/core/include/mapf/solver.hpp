#pragma once

#include "mapf/distance.hpp"
#include "mapf/instance.hpp"
#include "mapf/solution.hpp"

namespace mapf {

enum class SolveStatus { Solved, Timeout, Unsolvable };

const char* to_string(SolveStatus s);

// At least one of the two limits must be positive. With only a node limit
// the search is bit-deterministic, which is what tests and data generation
// rely on; wall-clock limits are for interactive use.
struct SolverBudget {
  int64_t time_limit_ms = 0;  // 0 = unlimited
  uint64_t node_limit = 0;    // 0 = unlimited; counts configuration probes
};

struct SolveResult {
  SolveStatus status = SolveStatus::Timeout;
  Solution solution;  // populated when status == Solved
  size_t sum_of_costs = 0;
  size_t makespan = 0;
  uint64_t nodes_expanded = 0;
  int64_t elapsed_ms = 0;
  bool proven_optimal = false;
  size_t improvements = 0;  // solutions that beat an earlier one
};

// Anytime search: a lazily constrained greedy dive reaches a first solution
// fast, then the search restarts with the incumbent cost as a pruning bound
// and randomized tie-breaking until the budget ends or a restart exhausts
// its frontier, which certifies the incumbent optimal.
SolveResult solve(const MAPFInstance& inst, const SolverBudget& budget,
                  FieldCache& cache);

// Convenience shim for re-solving from a mid-rollout configuration.
MAPFInstance sub_instance(const MAPFInstance& base, const Config& from);

}  // namespace mapf
