#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mapf/types.hpp"

namespace mapf {

// 4-connected grid. blocked is row-major, true = obstacle.
struct GridMap {
  int32_t width = 0;
  int32_t height = 0;
  std::vector<uint8_t> blocked;

  GridMap() = default;
  GridMap(int32_t w, int32_t h) : width(w), height(h), blocked(w * h, 0) {}

  size_t size() const { return static_cast<size_t>(width) * height; }
  size_t index(Cell c) const {
    return static_cast<size_t>(c.y) * width + c.x;
  }
  Cell cell(size_t idx) const {
    return Cell{static_cast<int32_t>(idx % width),
                static_cast<int32_t>(idx / width)};
  }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  bool is_blocked(Cell c) const { return blocked[index(c)] != 0; }
  bool passable(Cell c) const { return in_bounds(c) && !is_blocked(c); }

  size_t free_cells() const;
  bool all_free() const;

  // Content hash over dimensions and obstacle layout, used as a cache key.
  uint64_t content_hash() const;

  bool operator==(const GridMap& o) const {
    return width == o.width && height == o.height && blocked == o.blocked;
  }
};

// Parses ASCII grids: '.' free, '@' and 'T' blocked. Rows must have equal
// length. An optional MovingAI-style header (type/height/width/map lines) is
// skipped. Throws NonRectangularError / UnknownGlyphError.
GridMap parse_map(const std::string& text);

GridMap load_map(const std::string& path);

// Writes '.' / '@' rows, one per line. parse_map(write_map(m)) == m.
std::string write_map(const GridMap& m);
void save_map(const GridMap& m, const std::string& path);

}  // namespace mapf
