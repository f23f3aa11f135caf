#include "mapf/instance.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace mapf {

void MAPFInstance::validate() const {
  if (starts.size() != goals.size())
    throw ArityMismatchError("starts/goals arity mismatch: " +
                             std::to_string(starts.size()) + " vs " +
                             std::to_string(goals.size()));
  if (starts.empty()) throw ArityMismatchError("instance has no agents");
  std::unordered_set<Cell> seen_s, seen_g;
  for (size_t i = 0; i < starts.size(); ++i) {
    if (!map.passable(starts[i]))
      throw GoalBlockedError("agent " + std::to_string(i) +
                             " start is blocked or out of bounds");
    if (!map.passable(goals[i]))
      throw GoalBlockedError("agent " + std::to_string(i) +
                             " goal is blocked or out of bounds");
    if (!seen_s.insert(starts[i]).second)
      throw ArityMismatchError("duplicate start for agent " +
                               std::to_string(i));
    if (!seen_g.insert(goals[i]).second)
      throw ArityMismatchError("duplicate goal for agent " +
                               std::to_string(i));
  }
}

MAPFInstance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open instance file: " + path);

  MAPFInstance inst;
  std::string map_path;
  size_t n = 0;
  bool have_map = false, have_agents = false;

  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "map") {
      ls >> map_path;
      have_map = true;
    } else if (key == "agents") {
      ls >> n;
      have_agents = true;
    } else if (key == "seed") {
      ls >> inst.seed;
    } else {
      // Agent rows begin; this line is the first of them.
      int sx, sy, gx, gy;
      std::istringstream row(line);
      if (!(row >> sx >> sy >> gx >> gy))
        throw IoError("bad line in instance file: " + line);
      inst.starts.push_back(Cell{sx, sy});
      inst.goals.push_back(Cell{gx, gy});
    }
  }
  if (!have_map || !have_agents)
    throw IoError("instance file missing map/agents header: " + path);
  if (inst.starts.size() != n)
    throw IoError("instance file declares " + std::to_string(n) +
                  " agents but has " + std::to_string(inst.starts.size()) +
                  " rows: " + path);

  auto dir = std::filesystem::path(path).parent_path();
  inst.map = load_map((dir / map_path).string());
  inst.validate();
  return inst;
}

void save_instance(const MAPFInstance& inst, const std::string& path,
                   const std::string& map_path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write instance file: " + path);
  f << "map " << map_path << "\n";
  f << "agents " << inst.num_agents() << "\n";
  f << "seed " << inst.seed << "\n";
  for (size_t i = 0; i < inst.num_agents(); ++i)
    f << inst.starts[i].x << " " << inst.starts[i].y << " " << inst.goals[i].x
      << " " << inst.goals[i].y << "\n";
}

}  // namespace mapf
