#pragma once

#include <array>

#include "mapf/distance.hpp"
#include "mapf/state.hpp"

namespace mapf {

inline constexpr int kFovRadius = 5;
inline constexpr int kFovSide = 2 * kFovRadius + 1;
inline constexpr size_t kFovCells = kFovSide * kFovSide;
inline constexpr size_t kHistoryLen = 4;
inline constexpr size_t kMaxNeighbors = 12;

// Last kHistoryLen executed actions, oldest first; -1 marks "no action yet".
using ActionHistory = std::array<int8_t, kHistoryLen>;

inline ActionHistory empty_history() {
  return ActionHistory{-1, -1, -1, -1};
}
inline void push_action(ActionHistory& h, Action a) {
  for (size_t i = 0; i + 1 < kHistoryLen; ++i) h[i] = h[i + 1];
  h[kHistoryLen - 1] = static_cast<int8_t>(a);
}

enum class FovCell : uint8_t { Free, Occupied, Obstacle, OutOfBounds };

struct NeighborObs {
  size_t agent;
  int32_t dx, dy;    // position relative to the observer
  int32_t gdx, gdy;  // that agent's goal relative to the observer
  ActionHistory history;
};

// Everything one agent can see: an 11x11 window of cell kinds and cost-to-go
// deltas (all through the observer's own distance field), its goal offset,
// its recent actions, and the nearest visible agents.
struct Observation {
  size_t agent = 0;
  Cell position{};
  int32_t goal_dx = 0, goal_dy = 0;
  std::array<FovCell, kFovCells> fov_kind{};
  // dist(cell) - dist(observer); kUnreachable when either end is cut off.
  // Only meaningful for Free/Occupied cells.
  std::array<int32_t, kFovCells> fov_delta{};
  int32_t cost_to_go = 0;  // kUnreachable if the goal is cut off
  ActionHistory history = empty_history();
  // Nearest other agents inside the window, by Manhattan distance then
  // index; at most kMaxNeighbors.
  std::vector<NeighborObs> neighbors;
};

Observation build_observation(const GridMap& map, const Config& config,
                              const std::vector<Cell>& goals,
                              const std::vector<ActionHistory>& histories,
                              const DistanceField& own_field, size_t agent);

}  // namespace mapf
