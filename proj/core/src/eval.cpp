#include "mapf/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <unordered_set>

namespace mapf {
namespace {

using Clock = std::chrono::steady_clock;

int64_t ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

// Forwards to the wrapped policy and accumulates per-decision wall time.
class TimingPolicy : public Policy {
 public:
  explicit TimingPolicy(Policy& inner) : inner_(inner) {}

  std::vector<Action> decide(const DecisionContext& ctx) override {
    auto t0 = Clock::now();
    auto out = inner_.decide(ctx);
    total_ns_ += std::chrono::duration_cast<std::chrono::nanoseconds>(
                     Clock::now() - t0)
                     .count();
    decisions_ += out.size();
    return out;
  }
  std::string name() const override { return inner_.name(); }
  void begin_episode(size_t num_agents) override {
    inner_.begin_episode(num_agents);
  }

  double mean_decision_us() const {
    return decisions_ ? static_cast<double>(total_ns_) / 1000.0 / decisions_
                      : 0.0;
  }

 private:
  Policy& inner_;
  int64_t total_ns_ = 0;
  size_t decisions_ = 0;
};

std::string format_instance_id(MapKind kind, size_t agents, uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-a%04zu-s%08llu", to_string(kind), agents,
                static_cast<unsigned long long>(seed));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Wilson score interval, z = 1.96.
void wilson_ci(double p, size_t n, double* lo, double* hi) {
  if (n == 0) {
    *lo = *hi = 0;
    return;
  }
  const double z = 1.96, z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  *lo = std::max(0.0, center - half);
  *hi = std::min(1.0, center + half);
}

void mean_ci(const std::vector<double>& xs, double* mean, double* lo,
             double* hi) {
  if (xs.empty()) {
    *mean = *lo = *hi = 0;
    return;
  }
  double m = 0;
  for (double x : xs) m += x;
  m /= xs.size();
  double var = 0;
  for (double x : xs) var += (x - m) * (x - m);
  var = xs.size() > 1 ? var / (xs.size() - 1) : 0.0;
  double half = 1.96 * std::sqrt(var / xs.size());
  *mean = m;
  *lo = m - half;
  *hi = m + half;
}

EpisodeResult run_episode(const MAPFInstance& inst, Policy& policy,
                          size_t step_limit, FieldCache& cache) {
  EpisodeResult ep;
  ep.num_agents = inst.starts.size();

  TimingPolicy timed(policy);
  RolloutLimits limits;
  limits.max_steps = step_limit;

  auto t0 = Clock::now();
  Rollout ro = run_rollout(inst, timed, cache, limits, inst.seed);
  ep.wall_ms = ms_since(t0);

  ep.steps_used = ro.horizon();
  ep.termination =
      ro.solved ? Termination::AllAtGoals : Termination::StepLimit;
  const Config& last = ro.states.back();
  for (size_t i = 0; i < last.size(); ++i)
    if (last[i] == inst.goals[i]) ++ep.agents_at_goal;
  ep.soc = sum_of_costs(inst.goals, Solution{ro.states});
  ep.mean_decision_us = timed.mean_decision_us();
  return ep;
}

}  // namespace

const char* to_string(Termination t) {
  return t == Termination::AllAtGoals ? "all_at_goals" : "step_limit";
}

SuiteReport run_suite(Policy& policy, const SuiteSpec& spec,
                      FieldCache& cache) {
  SuiteReport report;
  report.episodes.reserve(spec.items.size());

  for (const SuiteItem& item : spec.items) {
    MAPFInstance inst = generate_instance(item.kind, item.agents, item.seed);
    EpisodeResult ep = run_episode(inst, policy, item.step_limit, cache);
    ep.instance_id = format_instance_id(item.kind, item.agents, item.seed);
    ep.kind = item.kind;

    SolveResult expert = solve(inst, spec.expert_budget, cache);
    if (expert.status == SolveStatus::Solved) {
      ep.expert_soc = expert.sum_of_costs;
      if (expert.sum_of_costs > 0)
        ep.soc_ratio =
            static_cast<double>(ep.soc) / expert.sum_of_costs;
      else if (ep.soc == 0)
        ep.soc_ratio = 1.0;
    }
    report.episodes.push_back(std::move(ep));
  }

  std::sort(report.episodes.begin(), report.episodes.end(),
            [](const EpisodeResult& a, const EpisodeResult& b) {
              return a.instance_id < b.instance_id;
            });

  for (MapKind kind : {MapKind::Random, MapKind::Maze, MapKind::Warehouse,
                       MapKind::City, MapKind::Empty}) {
    MapTypeAggregate agg;
    agg.kind = kind;
    size_t solved = 0;
    double indep_sum = 0;
    std::vector<double> ratios;
    for (const EpisodeResult& ep : report.episodes) {
      if (ep.kind != kind) continue;
      ++agg.episodes;
      if (ep.termination == Termination::AllAtGoals) ++solved;
      indep_sum += ep.num_agents
                       ? static_cast<double>(ep.agents_at_goal) / ep.num_agents
                       : 0.0;
      if (ep.soc_ratio >= 0)
        ratios.push_back(ep.soc_ratio);
      else
        ++agg.ratio_excluded;
    }
    if (agg.episodes == 0) continue;
    agg.success_rate = static_cast<double>(solved) / agg.episodes;
    wilson_ci(agg.success_rate, agg.episodes, &agg.success_ci_low,
              &agg.success_ci_high);
    agg.independent_success_rate = indep_sum / agg.episodes;
    mean_ci(ratios, &agg.mean_soc_ratio, &agg.ratio_ci_low,
            &agg.ratio_ci_high);
    report.aggregates.push_back(agg);
  }
  return report;
}

SuiteSpec default_suite(size_t episodes_per_kind, size_t agents,
                        uint64_t seed) {
  SuiteSpec spec;
  const MapKind kinds[] = {MapKind::Random, MapKind::Maze, MapKind::Warehouse,
                           MapKind::City};
  for (size_t k = 0; k < 4; ++k) {
    for (size_t i = 0; i < episodes_per_kind; ++i) {
      SuiteItem item;
      item.kind = kinds[k];
      item.agents = agents;
      item.seed = seed + k * 100'003 + i;
      item.step_limit = kinds[k] == MapKind::City ? 256 : 128;
      spec.items.push_back(item);
    }
  }
  return spec;
}

std::vector<BenchRow> scalability_bench(Policy& policy, int32_t side,
                                        const std::vector<size_t>& agent_counts,
                                        int distance_cap, size_t step_limit,
                                        uint64_t seed, FieldCache& cache) {
  if (side <= 0) throw SpecInvalidError("bench map side must be positive");
  if (distance_cap <= 0)
    throw SpecInvalidError(
        "bench distance cap must be positive; 0 would pin goals to starts");

  GridMap map(side, side);
  const size_t cells = map.size();
  std::vector<BenchRow> rows;

  for (size_t count : agent_counts) {
    if (count == 0 || count > cells / 2)
      throw SpecInvalidError("bench agent count does not fit the map");

    uint64_t mixed = fnv1a(&seed, sizeof(seed));
    mixed = fnv1a(&count, sizeof(count), mixed);
    std::mt19937 rng(static_cast<uint32_t>(mixed));
    std::unordered_set<size_t> used_starts, used_goals;
    std::vector<Cell> starts, goals;
    starts.reserve(count);
    goals.reserve(count);

    while (starts.size() < count) {
      Cell s = map.cell(rand_index(rng, cells));
      if (!used_starts.insert(map.index(s)).second) continue;
      Cell g;
      bool found = false;
      for (int tries = 0; tries < 4096 && !found; ++tries) {
        int dx = static_cast<int>(rand_index(rng, 2 * distance_cap + 1)) -
                 distance_cap;
        int dy = static_cast<int>(rand_index(rng, 2 * distance_cap + 1)) -
                 distance_cap;
        int d = std::abs(dx) + std::abs(dy);
        if (d < 1 || d > distance_cap) continue;
        g = Cell{s.x + dx, s.y + dy};
        if (!map.in_bounds(g)) continue;
        if (used_goals.count(map.index(g))) continue;
        found = true;
      }
      if (!found) {
        used_starts.erase(map.index(s));
        continue;
      }
      used_goals.insert(map.index(g));
      starts.push_back(s);
      goals.push_back(g);
    }

    MAPFInstance inst;
    inst.map = map;
    inst.starts = std::move(starts);
    inst.goals = std::move(goals);
    inst.seed = seed;
    inst.validate();

    EpisodeResult ep = run_episode(inst, policy, step_limit, cache);
    BenchRow row;
    row.agents = count;
    row.steps = ep.steps_used;
    row.agents_at_goal = ep.agents_at_goal;
    row.independent_success_rate =
        static_cast<double>(ep.agents_at_goal) / count;
    row.total_ms = ep.wall_ms;
    row.mean_decision_us = ep.mean_decision_us;
    rows.push_back(row);
  }
  return rows;
}

ScalingFit fit_scaling(const std::vector<BenchRow>& rows) {
  ScalingFit out;
  if (rows.empty()) return out;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const BenchRow& r : rows) {
    double x = static_cast<double>(r.agents);
    double y = static_cast<double>(r.total_ms);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  double slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0.0;
  double intercept = (sy - slope * sx) / n;

  double ss_res = 0, ss_tot = 0;
  double mean_y = sy / n;
  for (const BenchRow& r : rows) {
    double y = static_cast<double>(r.total_ms);
    double pred = slope * r.agents + intercept;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  out.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const BenchRow& r : rows) {
    lo = std::min(lo, r.mean_decision_us);
    hi = std::max(hi, r.mean_decision_us);
  }
  out.decision_spread = lo > 0 ? (hi - lo) / lo : 0.0;
  return out;
}

std::vector<std::pair<TrainMode, LoopResult>> ablation_run(
    const PolicyParams& base, const std::vector<Sample>& expert,
    const std::vector<Sample>& validation,
    const std::vector<MAPFInstance>& probes, const LoopConfig& base_cfg,
    const std::vector<TrainMode>& modes, FieldCache& cache) {
  std::vector<std::pair<TrainMode, LoopResult>> out;
  out.reserve(modes.size());
  for (TrainMode mode : modes) {
    LoopConfig cfg = base_cfg;
    cfg.mode = mode;
    out.emplace_back(
        mode, run_training_loop(base, expert, validation, probes, cfg, cache));
  }
  return out;
}

std::string episodes_csv(const SuiteReport& report) {
  std::string out =
      "instance_id,map,agents,termination,steps,agents_at_goal,soc,"
      "expert_soc,soc_ratio,wall_ms,mean_decision_us\n";
  for (const EpisodeResult& ep : report.episodes) {
    out += ep.instance_id;
    out += ',';
    out += to_string(ep.kind);
    out += ',' + std::to_string(ep.num_agents);
    out += ',';
    out += to_string(ep.termination);
    out += ',' + std::to_string(ep.steps_used);
    out += ',' + std::to_string(ep.agents_at_goal);
    out += ',' + std::to_string(ep.soc);
    out += ',';
    if (ep.expert_soc) out += std::to_string(*ep.expert_soc);
    out += ',';
    if (ep.soc_ratio >= 0) out += fmt(ep.soc_ratio);
    out += ',' + std::to_string(ep.wall_ms);
    out += ',' + fmt(ep.mean_decision_us);
    out += '\n';
  }
  return out;
}

std::string aggregates_csv(const SuiteReport& report) {
  std::string out =
      "map,episodes,success_rate,success_ci_low,success_ci_high,"
      "independent_success_rate,mean_soc_ratio,ratio_ci_low,ratio_ci_high,"
      "ratio_excluded\n";
  for (const MapTypeAggregate& a : report.aggregates) {
    out += to_string(a.kind);
    out += ',' + std::to_string(a.episodes);
    out += ',' + fmt(a.success_rate);
    out += ',' + fmt(a.success_ci_low);
    out += ',' + fmt(a.success_ci_high);
    out += ',' + fmt(a.independent_success_rate);
    out += ',' + fmt(a.mean_soc_ratio);
    out += ',' + fmt(a.ratio_ci_low);
    out += ',' + fmt(a.ratio_ci_high);
    out += ',' + std::to_string(a.ratio_excluded);
    out += '\n';
  }
  return out;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "agents,steps,agents_at_goal,independent_success_rate,total_ms,"
      "mean_decision_us\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.agents);
    out += ',' + std::to_string(r.steps);
    out += ',' + std::to_string(r.agents_at_goal);
    out += ',' + fmt(r.independent_success_rate);
    out += ',' + std::to_string(r.total_ms);
    out += ',' + fmt(r.mean_decision_us);
    out += '\n';
  }
  return out;
}

std::string curves_csv(
    const std::vector<std::pair<TrainMode, LoopResult>>& runs) {
  std::string out = "mode,phase,iteration,train_loss,val_loss,success_rate\n";
  for (const auto& [mode, result] : runs) {
    size_t iteration = 0;
    for (const PhaseRecord& phase : result.phases) {
      for (size_t i = 0; i < phase.train.losses.size(); ++i) {
        ++iteration;
        bool last = i + 1 == phase.train.losses.size();
        out += to_string(mode);
        out += ',' + std::to_string(phase.phase);
        out += ',' + std::to_string(iteration);
        out += ',' + fmt(phase.train.losses[i]);
        out += ',';
        if (last) out += fmt(phase.val.loss);
        out += ',';
        if (last && phase.success_rate >= 0) out += fmt(phase.success_rate);
        out += '\n';
      }
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace mapf
