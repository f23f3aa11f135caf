#pragma once

#include <memory>
#include <optional>
#include <random>
#include <utility>

#include "mapf/policy.hpp"

namespace mapf {

// One-step configuration generator with priority inheritance. Higher-priority
// agents pick the neighbor closest to their goal; a blocked lower-priority
// occupant is planned recursively before the move commits.
class PibtStepper {
 public:
  PibtStepper(const GridMap& map,
              std::vector<std::shared_ptr<const DistanceField>> fields);

  // Builds the next configuration. `constraints` pre-assigns agents to cells
  // (pairs must be mutually consistent). `order` lists all agents, highest
  // priority first. When `tiebreak_rng` is null, equally good candidate cells
  // keep the fixed action order, so the result is deterministic. Returns
  // nullopt when no conflict-free configuration satisfies the constraints.
  std::optional<Config> build(
      const Config& now,
      const std::vector<std::pair<size_t, Cell>>& constraints,
      const std::vector<size_t>& order, std::mt19937* tiebreak_rng);

  const DistanceField& field(size_t agent) const { return *fields_[agent]; }

 private:
  bool plan_agent(size_t ai, Cell pos, std::mt19937* tiebreak_rng,
                  bool parent_holds_self);
  size_t tile_index(Cell c) const;

  const GridMap& map_;
  std::vector<std::shared_ptr<const DistanceField>> fields_;
  std::vector<Cell> analytic_goal_;  // x = -1 when the field needs a lookup
  // interleaved (now, next) occupancy in an 8x8-tiled layout
  std::vector<int16_t> occ_;
  size_t tiles_x_ = 0;
  std::vector<Cell> next_;
  std::vector<uint8_t> planned_;
  std::vector<size_t>* touched_ = nullptr;
};

// Agents ordered by distance to goal, farthest first; ties by index.
std::vector<size_t> priority_order(
    const Config& config,
    const std::vector<std::shared_ptr<const DistanceField>>& fields);

// One-step lookahead controller built on the stepper. Priorities grow while
// an agent is off its goal and reset on arrival, so waiting agents
// eventually outrank everyone blocking them. Ties between equally good
// cells are randomized through the episode rng, which dissolves symmetric
// stalls; runs are reproducible per seed.
class PibtPolicy : public Policy {
 public:
  std::vector<Action> decide(const DecisionContext& ctx) override;
  std::string name() const override { return "pibt"; }
  void begin_episode(size_t num_agents) override;

 private:
  std::vector<int64_t> priority_;
  std::unique_ptr<PibtStepper> stepper_;
  const GridMap* bound_map_ = nullptr;
};

}  // namespace mapf
