#pragma once

#include <vector>

#include "mapf/grid_map.hpp"

namespace mapf {

// Joint state: one cell per agent.
using Config = std::vector<Cell>;

struct VertexConflict {
  size_t agent_a;
  size_t agent_b;
  Cell cell;
};

// Two agents swapping cells in one step. Following moves are legal.
struct EdgeConflict {
  size_t agent_a;
  size_t agent_b;
};

struct ConflictReport {
  std::vector<size_t> obstacle_violations;  // agents whose move hit a wall
  std::vector<VertexConflict> vertex_conflicts;
  std::vector<EdgeConflict> edge_conflicts;

  bool clean() const {
    return obstacle_violations.empty() && vertex_conflicts.empty() &&
           edge_conflicts.empty();
  }
};

// Raw: illegal moves into walls become stays (reported); vertex and edge
// conflicts are reported but the post-state keeps the colliding positions.
// Execute: conflicting agents are forced to wait until the joint move is
// collision-free; the returned state is always valid.
enum class StepMode { Raw, Execute };

struct StepResult {
  Config next;
  // Actions actually taken, after wall stops and conflict resolution.
  std::vector<Action> executed;
  ConflictReport report;
};

StepResult step(const GridMap& map, const Config& current,
                const std::vector<Action>& actions, StepMode mode);

// Conflicts within a single configuration (shared cells).
std::vector<VertexConflict> find_vertex_conflicts(const Config& c);

// Conflicts of the transition prev -> next (swaps).
std::vector<EdgeConflict> find_edge_conflicts(const Config& prev,
                                              const Config& next);

bool all_at_goals(const Config& c, const std::vector<Cell>& goals);

}  // namespace mapf
