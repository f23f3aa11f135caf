#include "mapf/grid_map.hpp"

#include <fstream>
#include <sstream>

namespace mapf {

const char* action_name(Action a) {
  switch (a) {
    case Action::Up:
      return "Up";
    case Action::Down:
      return "Down";
    case Action::Left:
      return "Left";
    case Action::Right:
      return "Right";
    case Action::Wait:
      return "Wait";
  }
  return "?";
}

Action action_between(Cell from, Cell to) {
  for (int a = 0; a < kNumActions; ++a) {
    if (apply_action(from, static_cast<Action>(a)) == to)
      return static_cast<Action>(a);
  }
  throw MapfError("cells are not adjacent: (" + std::to_string(from.x) + "," +
                  std::to_string(from.y) + ") -> (" + std::to_string(to.x) +
                  "," + std::to_string(to.y) + ")");
}

size_t GridMap::free_cells() const {
  size_t n = 0;
  for (uint8_t b : blocked) n += (b == 0);
  return n;
}

bool GridMap::all_free() const {
  for (uint8_t b : blocked)
    if (b) return false;
  return true;
}

uint64_t GridMap::content_hash() const {
  uint64_t h = kFnvOffset;
  h = fnv1a(&width, sizeof(width), h);
  h = fnv1a(&height, sizeof(height), h);
  h = fnv1a(blocked.data(), blocked.size(), h);
  return h;
}

static bool is_header_line(const std::string& line) {
  return line.rfind("type", 0) == 0 || line.rfind("height", 0) == 0 ||
         line.rfind("width", 0) == 0 || line == "map";
}

GridMap parse_map(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (rows.empty() && is_header_line(line)) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw NonRectangularError("map has no rows");

  GridMap m;
  m.height = static_cast<int32_t>(rows.size());
  m.width = static_cast<int32_t>(rows[0].size());
  m.blocked.reserve(m.size());
  for (const auto& row : rows) {
    if (static_cast<int32_t>(row.size()) != m.width)
      throw NonRectangularError("row length " + std::to_string(row.size()) +
                                " != " + std::to_string(m.width));
    for (char ch : row) {
      if (ch == '.')
        m.blocked.push_back(0);
      else if (ch == '@' || ch == 'T')
        m.blocked.push_back(1);
      else
        throw UnknownGlyphError(std::string("unknown map glyph '") + ch + "'");
    }
  }
  return m;
}

GridMap load_map(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open map file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_map(ss.str());
}

std::string write_map(const GridMap& m) {
  std::string out;
  out.reserve(m.size() + m.height);
  for (int32_t y = 0; y < m.height; ++y) {
    for (int32_t x = 0; x < m.width; ++x)
      out += m.is_blocked(Cell{x, y}) ? '@' : '.';
    out += '\n';
  }
  return out;
}

void save_map(const GridMap& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write map file: " + path);
  f << write_map(m);
}

}  // namespace mapf
