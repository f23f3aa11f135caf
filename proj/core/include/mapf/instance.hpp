#pragma once

#include <string>
#include <vector>

#include "mapf/grid_map.hpp"

namespace mapf {

// A MAPF problem: map plus per-agent start and goal cells.
struct MAPFInstance {
  GridMap map;
  std::vector<Cell> starts;
  std::vector<Cell> goals;
  uint64_t seed = 0;

  size_t num_agents() const { return starts.size(); }

  // Throws if any start/goal is out of bounds or blocked, arities differ,
  // or two agents share a start or share a goal.
  void validate() const;
};

// Text format:
//   map <relative path>
//   agents <n>
//   seed <s>
//   <sx> <sy> <gx> <gy>   (n lines)
// The map path is resolved relative to the instance file's directory.
MAPFInstance load_instance(const std::string& path);
void save_instance(const MAPFInstance& inst, const std::string& path,
                   const std::string& map_path);

}  // namespace mapf
