#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace mapf {

// Grid cell. x is the column, y is the row; (0,0) is the top-left corner.
struct Cell {
  int32_t x = 0;
  int32_t y = 0;

  bool operator==(const Cell& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Cell& o) const { return !(*this == o); }
  bool operator<(const Cell& o) const { return y != o.y ? y < o.y : x < o.x; }
};

inline int manhattan(Cell a, Cell b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

// The five moves. Order is fixed; it doubles as the tie-break order for
// greedy policies and as the action-token order.
enum class Action : uint8_t { Up = 0, Down = 1, Left = 2, Right = 3, Wait = 4 };

inline constexpr int kNumActions = 5;

// Up decreases y, Down increases y (top-left origin).
inline constexpr int kActionDx[kNumActions] = {0, 0, -1, 1, 0};
inline constexpr int kActionDy[kNumActions] = {-1, 1, 0, 0, 0};

inline Cell apply_action(Cell c, Action a) {
  return Cell{c.x + kActionDx[static_cast<int>(a)],
              c.y + kActionDy[static_cast<int>(a)]};
}

const char* action_name(Action a);

// Action that moves `from` to `to`; throws if the cells are not identical or
// grid-adjacent.
Action action_between(Cell from, Cell to);

// ---------------------------------------------------------------------------
// Errors

struct MapfError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonRectangularError : MapfError {
  using MapfError::MapfError;
};
struct UnknownGlyphError : MapfError {
  using MapfError::MapfError;
};
struct ArityMismatchError : MapfError {
  using MapfError::MapfError;
};
struct GoalBlockedError : MapfError {
  using MapfError::MapfError;
};
struct InstanceTooLargeError : MapfError {
  using MapfError::MapfError;
};
struct GenerationFailedError : MapfError {
  using MapfError::MapfError;
};
struct UnknownIdError : MapfError {
  using MapfError::MapfError;
};
struct NonFiniteScoreError : MapfError {
  using MapfError::MapfError;
};
struct SpecInvalidError : MapfError {
  using MapfError::MapfError;
};
struct IoError : MapfError {
  using MapfError::MapfError;
};
struct CorruptShardError : IoError {
  using IoError::IoError;
};

// ---------------------------------------------------------------------------
// Small utilities shared across modules

struct Deadline {
  std::chrono::steady_clock::time_point start;
  int64_t limit_ms;  // 0 = no wall-clock limit

  explicit Deadline(int64_t limit_ms_ = 0)
      : start(std::chrono::steady_clock::now()), limit_ms(limit_ms_) {}

  int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
  bool expired() const { return limit_ms > 0 && elapsed_ms() >= limit_ms; }
};

inline constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
inline constexpr uint64_t kFnvPrime = 1099511628211ULL;

inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline uint64_t fnv1a_str(const std::string& s, uint64_t h = kFnvOffset) {
  return fnv1a(s.data(), s.size(), h);
}

// Uniform double in [0,1) built from two 32-bit draws. mt19937 output is
// portable, so this is bit-stable across platforms (unlike
// std::uniform_real_distribution).
inline double rand_unit(std::mt19937& rng) {
  uint64_t hi = rng();
  uint64_t lo = rng();
  uint64_t bits = (hi << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n); n must be positive.
inline size_t rand_index(std::mt19937& rng, size_t n) {
  return static_cast<size_t>(rand_unit(rng) * static_cast<double>(n)) % n;
}

}  // namespace mapf

template <>
struct std::hash<mapf::Cell> {
  size_t operator()(const mapf::Cell& c) const {
    return std::hash<int64_t>()((static_cast<int64_t>(c.y) << 32) ^
                                static_cast<uint32_t>(c.x));
  }
};
