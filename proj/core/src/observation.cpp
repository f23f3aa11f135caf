#include "mapf/observation.hpp"

#include <algorithm>

namespace mapf {

Observation build_observation(const GridMap& map, const Config& config,
                              const std::vector<Cell>& goals,
                              const std::vector<ActionHistory>& histories,
                              const DistanceField& own_field, size_t agent) {
  Observation obs;
  obs.agent = agent;
  obs.position = config[agent];
  obs.goal_dx = goals[agent].x - obs.position.x;
  obs.goal_dy = goals[agent].y - obs.position.y;
  obs.history = histories[agent];
  obs.cost_to_go = own_field.at(obs.position);

  // Occupancy of the window by other agents; the observer's own cell reads
  // as free so the center token is stable.
  std::array<int32_t, kFovCells> occupant;
  occupant.fill(-1);
  auto window_index = [&](Cell c) -> int {
    int dx = c.x - obs.position.x;
    int dy = c.y - obs.position.y;
    if (dx < -kFovRadius || dx > kFovRadius || dy < -kFovRadius ||
        dy > kFovRadius)
      return -1;
    return (dy + kFovRadius) * kFovSide + (dx + kFovRadius);
  };
  for (size_t i = 0; i < config.size(); ++i) {
    if (i == agent) continue;
    int w = window_index(config[i]);
    if (w >= 0) occupant[w] = static_cast<int32_t>(i);
  }

  const int32_t own_dist = obs.cost_to_go;
  for (int dy = -kFovRadius; dy <= kFovRadius; ++dy) {
    for (int dx = -kFovRadius; dx <= kFovRadius; ++dx) {
      size_t w = (dy + kFovRadius) * kFovSide + (dx + kFovRadius);
      Cell c{obs.position.x + dx, obs.position.y + dy};
      if (!map.in_bounds(c)) {
        obs.fov_kind[w] = FovCell::OutOfBounds;
        obs.fov_delta[w] = kUnreachable;
        continue;
      }
      if (map.is_blocked(c)) {
        obs.fov_kind[w] = FovCell::Obstacle;
        obs.fov_delta[w] = kUnreachable;
        continue;
      }
      obs.fov_kind[w] =
          occupant[w] >= 0 ? FovCell::Occupied : FovCell::Free;
      int32_t d = own_field.at(c);
      obs.fov_delta[w] = (d == kUnreachable || own_dist == kUnreachable)
                             ? kUnreachable
                             : d - own_dist;
    }
  }

  std::vector<size_t> seen;
  for (size_t i = 0; i < config.size(); ++i) {
    if (i == agent) continue;
    if (window_index(config[i]) >= 0) seen.push_back(i);
  }
  std::sort(seen.begin(), seen.end(), [&](size_t a, size_t b) {
    int da = manhattan(config[a], obs.position);
    int db = manhattan(config[b], obs.position);
    return da != db ? da < db : a < b;
  });
  if (seen.size() > kMaxNeighbors) seen.resize(kMaxNeighbors);
  for (size_t i : seen) {
    NeighborObs nb;
    nb.agent = i;
    nb.dx = config[i].x - obs.position.x;
    nb.dy = config[i].y - obs.position.y;
    nb.gdx = goals[i].x - obs.position.x;
    nb.gdy = goals[i].y - obs.position.y;
    nb.history = histories[i];
    obs.neighbors.push_back(nb);
  }
  return obs;
}

}  // namespace mapf
