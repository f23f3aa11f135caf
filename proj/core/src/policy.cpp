#include "mapf/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

namespace mapf {

namespace {

// Best candidate by (cost-to-go, action order), skipping cells other agents
// hold right now. `banned` optionally rules one cell out.
Action greedy_choice(const DecisionContext& ctx, size_t agent,
                     const std::unordered_set<Cell>* occupied,
                     const Cell* banned, const int* tie_order) {
  const auto& field = *ctx.fields[agent];
  Cell cur = ctx.config[agent];
  int64_t best_d = -1;
  int best_rank = -1;
  Action best = Action::Wait;
  for (int a = 0; a < kNumActions; ++a) {
    Cell u = apply_action(cur, static_cast<Action>(a));
    if (!ctx.map.passable(u)) continue;
    if (banned && u == *banned) continue;
    if (u != cur && occupied->count(u)) continue;
    int64_t d = field.at(u);
    int rank = tie_order ? tie_order[a] : a;
    if (best_d < 0 || d < best_d || (d == best_d && rank < best_rank)) {
      best_d = d;
      best_rank = rank;
      best = static_cast<Action>(a);
    }
  }
  return best;
}

std::unordered_set<Cell> occupied_cells(const Config& c) {
  return std::unordered_set<Cell>(c.begin(), c.end());
}

}  // namespace

std::vector<Action> GreedyPolicy::decide(const DecisionContext& ctx) {
  auto occupied = occupied_cells(ctx.config);
  std::vector<Action> out(ctx.config.size());
  for (size_t i = 0; i < ctx.config.size(); ++i)
    out[i] = greedy_choice(ctx, i, &occupied, nullptr, nullptr);
  return out;
}

void DetourGreedyPolicy::begin_episode(size_t num_agents) {
  last_position_.assign(num_agents, Cell{-1, -1});
  last_proposal_.assign(num_agents, -1);
}

std::vector<Action> DetourGreedyPolicy::decide(const DecisionContext& ctx) {
  const size_t n = ctx.config.size();
  if (last_position_.size() != n) begin_episode(n);
  auto occupied = occupied_cells(ctx.config);
  std::vector<Action> out(n);
  for (size_t i = 0; i < n; ++i) {
    Cell cur = ctx.config[i];
    bool was_blocked = last_proposal_[i] >= 0 &&
                       last_proposal_[i] != static_cast<int8_t>(Action::Wait) &&
                       last_position_[i] == cur;
    if (!was_blocked) {
      out[i] = greedy_choice(ctx, i, &occupied, nullptr, nullptr);
    } else {
      Action blocked = static_cast<Action>(last_proposal_[i]);
      Cell banned = apply_action(cur, blocked);
      // Right of the blocked heading first, then straight on, etc.
      static const Action kRightOf[4] = {Action::Right, Action::Left,
                                         Action::Up, Action::Down};
      Action pref = kRightOf[static_cast<int>(blocked)];
      int tie_order[kNumActions];
      for (int a = 0; a < kNumActions; ++a)
        tie_order[a] = (a - static_cast<int>(pref) + kNumActions) % kNumActions;
      out[i] = greedy_choice(ctx, i, &occupied, &banned, tie_order);
    }
    last_position_[i] = cur;
    last_proposal_[i] = static_cast<int8_t>(out[i]);
  }
  return out;
}

std::vector<Action> RandomPolicy::decide(const DecisionContext& ctx) {
  std::vector<Action> out(ctx.config.size());
  for (size_t i = 0; i < ctx.config.size(); ++i) {
    Action cands[kNumActions];
    size_t m = 0;
    for (int a = 0; a < kNumActions; ++a) {
      if (ctx.map.passable(apply_action(ctx.config[i], static_cast<Action>(a))))
        cands[m++] = static_cast<Action>(a);
    }
    out[i] = cands[rand_index(ctx.rng, m)];
  }
  return out;
}

std::array<double, kNumActions> policy_logits(const PolicyParams& p,
                                              const TokenSeq& seq) {
  std::array<double, kNumActions> logits{};
  for (size_t pos = 0; pos < kContextLen; ++pos) {
    const double* w = &p.w[param_index(pos, seq[pos], 0)];
    for (size_t a = 0; a < kNumActions; ++a) logits[a] += w[a];
  }
  return logits;
}

std::array<double, kNumActions> softmax(
    const std::array<double, kNumActions>& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  std::array<double, kNumActions> p{};
  double sum = 0;
  for (size_t a = 0; a < kNumActions; ++a) {
    p[a] = std::exp(logits[a] - mx);
    sum += p[a];
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::vector<Action> LinearPolicy::decide(const DecisionContext& ctx) {
  std::vector<Action> out(ctx.config.size());
  for (size_t i = 0; i < ctx.config.size(); ++i) {
    Observation obs = build_observation(ctx.map, ctx.config, ctx.goals,
                                        ctx.histories, *ctx.fields[i], i);
    auto logits = policy_logits(*params_, tokenize(obs));
    if (stochastic_) {
      auto p = softmax(logits);
      double r = rand_unit(ctx.rng);
      double acc = 0;
      size_t pick = kNumActions - 1;
      for (size_t a = 0; a < kNumActions; ++a) {
        acc += p[a];
        if (r < acc) {
          pick = a;
          break;
        }
      }
      out[i] = static_cast<Action>(pick);
    } else {
      size_t best = 0;
      for (size_t a = 1; a < kNumActions; ++a)
        if (logits[a] > logits[best]) best = a;
      out[i] = static_cast<Action>(best);
    }
  }
  return out;
}

namespace {
constexpr char kParamsMagic[8] = {'M', 'A', 'P', 'F', 'P', 'O', 'L', '1'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void save_params(const PolicyParams& p, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw IoError("cannot write params file: " + tmp);
    f.write(kParamsMagic, sizeof(kParamsMagic));
    put(f, p.context);
    put(f, p.vocab);
    put(f, p.actions);
    put(f, static_cast<uint64_t>(p.w.size()));
    f.write(reinterpret_cast<const char*>(p.w.data()),
            p.w.size() * sizeof(double));
    put(f, fnv1a(p.w.data(), p.w.size() * sizeof(double)));
    if (!f) throw IoError("short write to params file: " + tmp);
  }
  std::remove(path.c_str());
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("cannot move params file into place: " + path);
}

PolicyParams load_params(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open params file: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kParamsMagic, sizeof(magic)) != 0)
    throw CorruptShardError("bad params magic: " + path);
  PolicyParams p;
  uint64_t count = 0;
  get(f, p.context);
  get(f, p.vocab);
  get(f, p.actions);
  get(f, count);
  if (p.context != kContextLen || p.vocab != kVocabSize ||
      p.actions != kNumActions ||
      count != kContextLen * kVocabSize * kNumActions)
    throw CorruptShardError("params dimensions mismatch: " + path);
  p.w.resize(count);
  f.read(reinterpret_cast<char*>(p.w.data()), count * sizeof(double));
  uint64_t checksum = 0;
  get(f, checksum);
  if (!f) throw CorruptShardError("params file truncated: " + path);
  if (checksum != fnv1a(p.w.data(), p.w.size() * sizeof(double)))
    throw CorruptShardError("params checksum mismatch: " + path);
  return p;
}

}  // namespace mapf
