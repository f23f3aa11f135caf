#include "mapf/instance_gen.hpp"

#include <algorithm>

#include "mapf/distance.hpp"

namespace mapf {

MapKind map_kind_from_string(const std::string& s) {
  if (s == "random") return MapKind::Random;
  if (s == "maze") return MapKind::Maze;
  if (s == "warehouse") return MapKind::Warehouse;
  if (s == "city") return MapKind::City;
  if (s == "empty") return MapKind::Empty;
  throw UnknownIdError("unknown map kind: " + s);
}

const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Random:
      return "random";
    case MapKind::Maze:
      return "maze";
    case MapKind::Warehouse:
      return "warehouse";
    case MapKind::City:
      return "city";
    case MapKind::Empty:
      return "empty";
  }
  return "?";
}

namespace {

int32_t pick_side(std::mt19937& rng, int32_t side) {
  if (side == 0) return 17 + static_cast<int32_t>(rand_index(rng, 5));
  if (side < 5) throw SpecInvalidError("map side must be 0 or at least 5");
  return side;
}

GridMap random_map(std::mt19937& rng, int32_t side) {
  side = pick_side(rng, side);
  double density = 0.10 + 0.20 * rand_unit(rng);
  GridMap m(side, side);
  for (auto& b : m.blocked) b = rand_unit(rng) < density;
  return m;
}

// Depth-first carving on the odd sublattice; every carved cell stays
// connected to the entry, so the maze has a single component.
GridMap maze_map(std::mt19937& rng, int32_t side) {
  side = pick_side(rng, side);
  GridMap m(side, side);
  std::fill(m.blocked.begin(), m.blocked.end(), uint8_t{1});

  auto carve = [&](Cell c) { m.blocked[m.index(c)] = 0; };
  std::vector<Cell> stack{Cell{1, 1}};
  carve(Cell{1, 1});
  while (!stack.empty()) {
    Cell c = stack.back();
    Cell nexts[4];
    size_t k = 0;
    for (int a = 0; a < 4; ++a) {
      Cell n{c.x + 2 * kActionDx[a], c.y + 2 * kActionDy[a]};
      if (n.x >= 1 && n.x < side - 1 && n.y >= 1 && n.y < side - 1 &&
          m.is_blocked(n))
        nexts[k++] = n;
    }
    if (k == 0) {
      stack.pop_back();
      continue;
    }
    Cell n = nexts[rand_index(rng, k)];
    carve(Cell{(c.x + n.x) / 2, (c.y + n.y) / 2});
    carve(n);
    stack.push_back(n);
  }
  return m;
}

GridMap warehouse_map() {
  GridMap m(46, 33);
  for (int32_t k = 0; k < 3; ++k) {    // shelf columns
    for (int32_t r = 0; r < 7; ++r) {  // shelf rows
      for (int32_t y = 4 + 4 * r; y <= 5 + 4 * r; ++y)
        for (int32_t x = 6 + 12 * k; x <= 15 + 12 * k; ++x)
          m.blocked[m.index(Cell{x, y})] = 1;
    }
  }
  return m;
}

GridMap city_map() {
  GridMap m(64, 64);
  for (int32_t y = 0; y < 64; ++y)
    for (int32_t x = 0; x < 64; ++x)
      m.blocked[m.index(Cell{x, y})] = !(x % 8 < 2 || y % 8 < 2);
  return m;
}

GridMap empty_map(std::mt19937& rng, int32_t side) {
  side = pick_side(rng, side);
  return GridMap(side, side);
}

template <typename Pred>
std::vector<Cell> cells_where(const GridMap& m, Pred pred) {
  std::vector<Cell> out;
  for (size_t i = 0; i < m.size(); ++i) {
    Cell c = m.cell(i);
    if (!m.is_blocked(c) && pred(c)) out.push_back(c);
  }
  return out;
}

void shuffle_cells(std::vector<Cell>& cells, std::mt19937& rng) {
  for (size_t i = cells.size(); i > 1; --i)
    std::swap(cells[i - 1], cells[rand_index(rng, i)]);
}

}  // namespace

GridMap generate_map(MapKind kind, std::mt19937& rng, int32_t side) {
  switch (kind) {
    case MapKind::Random:
      return random_map(rng, side);
    case MapKind::Maze:
      return maze_map(rng, side);
    case MapKind::Warehouse:
      return warehouse_map();
    case MapKind::City:
      return city_map();
    case MapKind::Empty:
      return empty_map(rng, side);
  }
  throw UnknownIdError("bad map kind");
}

MAPFInstance generate_instance(MapKind kind, size_t num_agents, uint64_t seed,
                               int32_t side) {
  std::mt19937 rng(static_cast<uint32_t>(fnv1a(&seed, sizeof(seed))));
  constexpr int kAttempts = 200;

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    GridMap map = generate_map(kind, rng, side);

    std::vector<Cell> start_pool, goal_pool;
    if (kind == MapKind::Warehouse) {
      start_pool = cells_where(map, [&](Cell c) {
        return c.x < 3 || c.x >= map.width - 3 || c.y < 2 ||
               c.y >= map.height - 2;
      });
      goal_pool = cells_where(map, [&](Cell c) {
        for (int a = 0; a < 4; ++a) {
          Cell nb{c.x + kActionDx[a], c.y + kActionDy[a]};
          if (map.in_bounds(nb) && map.is_blocked(nb)) return true;
        }
        return false;
      });
    } else {
      start_pool = cells_where(map, [](Cell) { return true; });
      goal_pool = start_pool;
    }
    if (start_pool.size() < num_agents || goal_pool.size() < num_agents)
      continue;

    shuffle_cells(start_pool, rng);
    shuffle_cells(goal_pool, rng);

    MAPFInstance inst;
    inst.map = std::move(map);
    inst.seed = seed;
    inst.starts.assign(start_pool.begin(), start_pool.begin() + num_agents);
    inst.goals.assign(goal_pool.begin(), goal_pool.begin() + num_agents);

    bool ok = true;
    for (size_t i = 0; i < num_agents && ok; ++i) {
      DistanceField field(inst.map, inst.goals[i]);
      ok = field.reachable(inst.starts[i]);
    }
    if (!ok) continue;
    inst.validate();
    return inst;
  }
  throw GenerationFailedError("no valid placement for " +
                              std::to_string(num_agents) + " agents on " +
                              std::string(to_string(kind)) + " after " +
                              std::to_string(kAttempts) + " attempts");
}

MapKind training_map_kind(std::mt19937& rng, double random_fraction) {
  return rand_unit(rng) < random_fraction ? MapKind::Random : MapKind::Maze;
}

}  // namespace mapf
