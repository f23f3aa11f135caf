#include "mapf/tokens.hpp"

#include <sstream>

namespace mapf {

uint8_t value_token(int32_t delta, bool occupied) {
  uint8_t base = occupied ? tok::kAgtBase : tok::kValBase;
  if (delta == kUnreachable)
    return occupied ? tok::kAgtUnreach : tok::kValUnreach;
  if (delta < -kValueRange || delta > kValueRange)
    return occupied ? tok::kAgtFar : tok::kValFar;
  return static_cast<uint8_t>(base + delta + kValueRange);
}

uint8_t action_token(int8_t action_or_minus1) {
  if (action_or_minus1 < 0) return tok::kActNone;
  return static_cast<uint8_t>(tok::kActBase + action_or_minus1);
}

TokenSeq tokenize(const Observation& obs) {
  TokenSeq seq;
  seq.fill(tok::kPad);
  size_t p = 0;
  seq[p++] = tok::kSepFov;
  for (size_t w = 0; w < kFovCells; ++w) {
    switch (obs.fov_kind[w]) {
      case FovCell::OutOfBounds:
        seq[p++] = tok::kOob;
        break;
      case FovCell::Obstacle:
        seq[p++] = tok::kWall;
        break;
      case FovCell::Free:
        seq[p++] = value_token(obs.fov_delta[w], false);
        break;
      case FovCell::Occupied:
        seq[p++] = value_token(obs.fov_delta[w], true);
        break;
    }
  }
  seq[p++] = tok::kSepSelf;
  seq[p++] = value_token(obs.goal_dx);
  seq[p++] = value_token(obs.goal_dy);
  seq[p++] = value_token(obs.cost_to_go);
  seq[p++] = tok::kSepHist;
  for (size_t i = 0; i < kHistoryLen; ++i)
    seq[p++] = action_token(obs.history[i]);
  for (size_t a = 0; a < kMaxNeighbors && a < obs.neighbors.size(); ++a) {
    const NeighborObs& nb = obs.neighbors[a];
    seq[p++] = tok::kSepAgent;
    seq[p++] = value_token(nb.dx);
    seq[p++] = value_token(nb.dy);
    seq[p++] = value_token(nb.gdx);
    seq[p++] = value_token(nb.gdy);
    for (size_t i = 0; i < kHistoryLen; ++i)
      seq[p++] = action_token(nb.history[i]);
  }
  return seq;
}

std::string describe_token(uint8_t id) {
  auto signed_name = [](const char* fam, int d) {
    std::ostringstream os;
    os << fam;
    if (d > 0) os << '+';
    os << d;
    return os.str();
  };
  if (id >= tok::kValBase && id < tok::kValBase + 25)
    return signed_name("val", static_cast<int>(id) - tok::kValBase -
                                  kValueRange);
  if (id == tok::kValFar) return "val_far";
  if (id == tok::kValUnreach) return "val_unreach";
  if (id >= tok::kAgtBase && id < tok::kAgtBase + 25)
    return signed_name("agt", static_cast<int>(id) - tok::kAgtBase -
                                  kValueRange);
  if (id == tok::kAgtFar) return "agt_far";
  if (id == tok::kAgtUnreach) return "agt_unreach";
  if (id == tok::kWall) return "wall";
  if (id == tok::kOob) return "oob";
  if (id >= tok::kActBase && id < tok::kActBase + kNumActions) {
    static const char* names[] = {"act_up", "act_down", "act_left",
                                  "act_right", "act_wait"};
    return names[id - tok::kActBase];
  }
  if (id == tok::kActNone) return "act_none";
  if (id == tok::kSepFov) return "sep_fov";
  if (id == tok::kSepSelf) return "sep_self";
  if (id == tok::kSepHist) return "sep_hist";
  if (id == tok::kSepAgent) return "sep_agent";
  if (id == tok::kPad) return "pad";
  throw UnknownIdError("token id out of range: " + std::to_string(id));
}

std::vector<std::string> token_table() {
  std::vector<std::string> names;
  names.reserve(kVocabSize);
  for (size_t id = 0; id < kVocabSize; ++id)
    names.push_back(describe_token(static_cast<uint8_t>(id)));
  return names;
}

std::string describe_tokens(const TokenSeq& seq) {
  std::ostringstream os;
  for (size_t p = 0; p < seq.size(); ++p)
    os << p << "\t" << static_cast<int>(seq[p]) << "\t"
       << describe_token(seq[p]) << "\n";
  return os.str();
}

}  // namespace mapf
