#pragma once

#include <random>

#include "mapf/instance.hpp"

namespace mapf {

enum class MapKind { Random, Maze, Warehouse, City, Empty };

MapKind map_kind_from_string(const std::string& s);
const char* to_string(MapKind kind);

// Random, maze, and empty maps draw a side in [17, 21] unless `side` pins
// one (minimum 5); random sprinkles obstacles at a density drawn from
// [0.10, 0.30], maze carves a perfect maze, so all its free cells are
// connected. Warehouse is a fixed 46x33 shelf layout, city a 64x64 street
// grid, empty an open square; both ignore `side`.
GridMap generate_map(MapKind kind, std::mt19937& rng, int32_t side = 0);

// Deterministic in `seed`. Starts are pairwise distinct, goals are pairwise
// distinct, and every agent can reach its goal. Warehouse instances start
// agents on the outer margin and put goals next to shelves. Throws
// GenerationFailedError when placements cannot be found.
MAPFInstance generate_instance(MapKind kind, size_t num_agents, uint64_t seed,
                               int32_t side = 0);

// Map kind mixer for training pools: `random_fraction` of the draws are
// plain random maps, the rest mazes.
MapKind training_map_kind(std::mt19937& rng, double random_fraction);

}  // namespace mapf
