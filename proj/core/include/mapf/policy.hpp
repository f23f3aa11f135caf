#pragma once

#include <memory>
#include <random>

#include "mapf/tokens.hpp"

namespace mapf {

struct DecisionContext {
  const GridMap& map;
  const Config& config;
  const std::vector<Cell>& goals;
  const std::vector<ActionHistory>& histories;
  const std::vector<std::shared_ptr<const DistanceField>>& fields;
  std::mt19937& rng;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::vector<Action> decide(const DecisionContext& ctx) = 0;
  virtual std::string name() const = 0;
  // Called once before an episode; stateful policies reset here.
  virtual void begin_episode(size_t /*num_agents*/) {}
};

// Each agent steps onto the reachable candidate cell (stay included) with
// the lowest cost-to-go that no other agent currently occupies; ties follow
// the fixed action order.
class GreedyPolicy : public Policy {
 public:
  std::vector<Action> decide(const DecisionContext& ctx) override;
  std::string name() const override { return "greedy"; }
};

// Greedy plus a livelock breaker: an agent whose proposed move was blocked
// last step rules out that cell once and tie-breaks toward the cell right of
// its blocked heading, which dissolves symmetric head-on stalls.
class DetourGreedyPolicy : public Policy {
 public:
  std::vector<Action> decide(const DecisionContext& ctx) override;
  std::string name() const override { return "greedy-detour"; }
  void begin_episode(size_t num_agents) override;

 private:
  std::vector<Cell> last_position_;
  std::vector<int8_t> last_proposal_;
};

// Uniform over passable moves; the floor every trained policy must beat.
class RandomPolicy : public Policy {
 public:
  std::vector<Action> decide(const DecisionContext& ctx) override;
  std::string name() const override { return "random"; }
};

// ---------------------------------------------------------------------------
// Linear-softmax scorer over the token rendering

struct PolicyParams {
  uint32_t context = kContextLen;
  uint32_t vocab = kVocabSize;
  uint32_t actions = kNumActions;
  std::vector<double> w;  // indexed by param_index

  PolicyParams() : w(kContextLen * kVocabSize * kNumActions, 0.0) {}
  size_t size() const { return w.size(); }
};

inline size_t param_index(size_t pos, size_t token, size_t action) {
  return (pos * kVocabSize + token) * kNumActions + action;
}

std::array<double, kNumActions> policy_logits(const PolicyParams& p,
                                              const TokenSeq& seq);
std::array<double, kNumActions> softmax(
    const std::array<double, kNumActions>& logits);

void save_params(const PolicyParams& p, const std::string& path);
PolicyParams load_params(const std::string& path);

// Tokenizes each agent's observation and scores it with the linear model.
// Stochastic mode samples from the softmax; otherwise argmax, ties to the
// lower action id.
class LinearPolicy : public Policy {
 public:
  explicit LinearPolicy(std::shared_ptr<const PolicyParams> params,
                        bool stochastic = false)
      : params_(std::move(params)), stochastic_(stochastic) {}

  std::vector<Action> decide(const DecisionContext& ctx) override;
  std::string name() const override {
    return stochastic_ ? "linear-sample" : "linear-argmax";
  }

  const PolicyParams& params() const { return *params_; }

 private:
  std::shared_ptr<const PolicyParams> params_;
  bool stochastic_;
};

}  // namespace mapf
