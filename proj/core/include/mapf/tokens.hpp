#pragma once

#include <array>
#include <string>
#include <vector>

#include "mapf/observation.hpp"

namespace mapf {

inline constexpr size_t kVocabSize = 67;
inline constexpr size_t kContextLen = 256;
inline constexpr int kValueRange = 12;  // relative values clamp to [-12, +12]

using TokenSeq = std::array<uint8_t, kContextLen>;

// Vocabulary layout. Two mirrored 27-id families encode signed cost-to-go
// deltas for free and agent-occupied cells; the rest are cell classes,
// actions, separators, and padding.
namespace tok {
inline constexpr uint8_t kValBase = 0;     // val-12 .. val+12 -> 0 .. 24
inline constexpr uint8_t kValFar = 25;
inline constexpr uint8_t kValUnreach = 26;
inline constexpr uint8_t kAgtBase = 27;    // agt-12 .. agt+12 -> 27 .. 51
inline constexpr uint8_t kAgtFar = 52;
inline constexpr uint8_t kAgtUnreach = 53;
inline constexpr uint8_t kWall = 54;
inline constexpr uint8_t kOob = 55;
inline constexpr uint8_t kActBase = 56;    // up, down, left, right, wait
inline constexpr uint8_t kActNone = 61;
inline constexpr uint8_t kSepFov = 62;
inline constexpr uint8_t kSepSelf = 63;
inline constexpr uint8_t kSepHist = 64;
inline constexpr uint8_t kSepAgent = 65;
inline constexpr uint8_t kPad = 66;
}  // namespace tok

// Signed delta in the free-cell family; kUnreachable and out-of-range inputs
// map to the family's unreach/far ids. `occupied` selects the agent family.
uint8_t value_token(int32_t delta, bool occupied = false);
uint8_t action_token(int8_t action_or_minus1);

// Fixed 256-token rendering of an observation. Deterministic; the same
// observation always yields the same bytes.
TokenSeq tokenize(const Observation& obs);

std::string describe_token(uint8_t id);
std::vector<std::string> token_table();  // all kVocabSize names, by id

// Human-oriented dump: one line per token with position, id and name.
std::string describe_tokens(const TokenSeq& seq);

}  // namespace mapf
