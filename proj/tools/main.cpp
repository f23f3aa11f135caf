// Command-line front end for the mapf toolkit: dataset generation, training,
// evaluation, and inspection verbs sharing one config/override mechanism.

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "mapf/config.hpp"
#include "mapf/ddg.hpp"
#include "mapf/eval.hpp"
#include "mapf/pibt.hpp"
#include "mapf/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Config file (TOML-style)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", opts.overrides,
                  "Override a config key, e.g. --set train.lr=0.01");
}

mapf::ConfigMap resolve_config(const CommonOpts& opts) {
  mapf::ConfigMap cfg;
  if (!opts.config_path.empty()) cfg = mapf::ConfigMap::load(opts.config_path);
  for (const std::string& s : opts.overrides) cfg.apply_override(s);
  return cfg;
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

void write_manifest(const std::string& path, const std::string& verb,
                    const mapf::ConfigMap& cfg, const json& extra) {
  json m;
  m["tool"] = "mapf";
  m["version"] = kVersion;
  m["command"] = verb;
  m["config_hash"] = hex64(cfg.hash());
  m["config"] = cfg.canonical();
  m["created_unix"] = static_cast<int64_t>(std::time(nullptr));
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = *it;
  mapf::write_text_file(path, m.dump(2) + "\n");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw mapf::IoError("cannot create directory: " + dir);
}

mapf::DdgConfig ddg_from(const mapf::ConfigMap& c) {
  mapf::DdgConfig d;
  d.probe_stride = c.get_int("ddg.probe_stride", d.probe_stride);
  d.harvest_len = c.get_int("ddg.harvest_len", d.harvest_len);
  d.delta_min = c.get_int("ddg.delta_min", d.delta_min);
  d.num_agents = c.get_int("ddg.agents", d.num_agents);
  d.random_map_fraction =
      c.get_double("ddg.random_map_fraction", d.random_map_fraction);
  d.map_side = static_cast<int32_t>(c.get_int("ddg.map_side", d.map_side));
  d.episode_limit = c.get_int("ddg.episode_limit", d.episode_limit);
  d.generation_target =
      c.get_int("ddg.generation_target", d.generation_target);
  d.max_episodes = c.get_int("ddg.max_episodes", d.max_episodes);
  d.harvest_include_settled =
      c.get_bool("ddg.harvest_include_settled", d.harvest_include_settled);
  d.probe_budget.time_limit_ms =
      c.get_int("ddg.probe_time_ms", d.probe_budget.time_limit_ms);
  d.probe_budget.node_limit =
      c.get_int("ddg.probe_nodes", d.probe_budget.node_limit);
  d.accurate_budget.time_limit_ms =
      c.get_int("ddg.accurate_time_ms", d.accurate_budget.time_limit_ms);
  d.accurate_budget.node_limit =
      c.get_int("ddg.accurate_nodes", d.accurate_budget.node_limit);
  return d;
}

mapf::TrainConfig train_from(const mapf::ConfigMap& c) {
  mapf::TrainConfig t;
  t.iterations = c.get_int("train.iterations", t.iterations);
  t.batch_size = c.get_int("train.batch_size", t.batch_size);
  t.lr = c.get_double("train.lr", t.lr);
  t.lr_final_fraction =
      c.get_double("train.lr_final_fraction", t.lr_final_fraction);
  t.mix = c.get_double("train.mix", t.mix);
  t.seed = c.get_int("train.seed", t.seed);
  return t;
}

mapf::LoopConfig loop_from(const mapf::ConfigMap& c) {
  mapf::LoopConfig l;
  l.gen = ddg_from(c);
  l.train = train_from(c);
  l.phases = c.get_int("loop.phases", l.phases);
  l.ring_capacity = c.get_int("loop.ring_capacity", l.ring_capacity);
  l.probe_episode_limit =
      c.get_int("loop.probe_episode_limit", l.probe_episode_limit);
  l.checkpoint_dir = c.get_string("loop.checkpoint_dir", l.checkpoint_dir);
  return l;
}

std::shared_ptr<const mapf::PolicyParams> load_or_zero(
    const std::string& params_path) {
  if (params_path.empty())
    return std::make_shared<const mapf::PolicyParams>();
  return std::make_shared<const mapf::PolicyParams>(
      mapf::load_params(params_path));
}

std::unique_ptr<mapf::Policy> make_policy(const std::string& name,
                                          const std::string& params_path) {
  if (name == "greedy") return std::make_unique<mapf::GreedyPolicy>();
  if (name == "greedy-detour")
    return std::make_unique<mapf::DetourGreedyPolicy>();
  if (name == "pibt") return std::make_unique<mapf::PibtPolicy>();
  if (name == "random") return std::make_unique<mapf::RandomPolicy>();
  if (name == "linear")
    return std::make_unique<mapf::LinearPolicy>(load_or_zero(params_path),
                                                false);
  if (name == "linear-sample")
    return std::make_unique<mapf::LinearPolicy>(load_or_zero(params_path),
                                                true);
  throw mapf::SpecInvalidError("unknown policy: " + name);
}

std::vector<mapf::MAPFInstance> make_probe_set(const mapf::ConfigMap& c) {
  size_t count = c.get_int("probe.count", 50);
  size_t agents = c.get_int("probe.agents", 4);
  uint64_t seed = c.get_int("probe.seed", 7);
  double random_fraction = c.get_double("ddg.random_map_fraction", 0.1);
  int32_t side = static_cast<int32_t>(
      c.get_int("probe.side", c.get_int("ddg.map_side", 0)));

  std::mt19937 rng(static_cast<uint32_t>(mapf::fnv1a(&seed, sizeof(seed))));
  std::vector<mapf::MAPFInstance> probes;
  probes.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    mapf::MapKind kind = mapf::training_map_kind(rng, random_fraction);
    probes.push_back(
        mapf::generate_instance(kind, agents, seed + 1 + i, side));
  }
  return probes;
}

json stats_json(const mapf::PhaseStats& s) {
  json j;
  j["episodes"] = s.episodes;
  j["candidates"] = s.candidates;
  j["probe_calls"] = s.probe_calls;
  j["accurate_calls"] = s.accurate_calls;
  j["expert_calls"] = s.expert_calls;
  j["failed_probes"] = s.failed_probes;
  j["failed_expert"] = s.failed_expert;
  j["selections"] = s.selections;
  j["no_selection"] = s.no_selection;
  j["samples_added"] = s.samples_added;
  j["hit_rate"] = s.hit_rate();
  j["mean_selected_delta"] = s.mean_selected_delta();
  j["selected_delta_inf"] = s.selected_delta_inf;
  j["probe_wall_ms"] = s.probe_wall_ms;
  j["expert_wall_ms"] = s.expert_wall_ms;
  j["wall_ms"] = s.wall_ms;
  return j;
}

// ---------------------------------------------------------------------------
// Verbs

int cmd_gen_maps(const CommonOpts& common, const std::string& kind_name,
                 size_t count, uint64_t seed, const std::string& out_dir) {
  mapf::ConfigMap cfg = resolve_config(common);
  mapf::MapKind kind = mapf::map_kind_from_string(kind_name);
  ensure_dir(out_dir);

  for (size_t i = 0; i < count; ++i) {
    uint64_t s = seed + i;
    std::mt19937 rng(static_cast<uint32_t>(mapf::fnv1a(&s, sizeof(s))));
    mapf::GridMap map = mapf::generate_map(kind, rng);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%04zu.map", kind_name.c_str(), i);
    mapf::save_map(map, (fs::path(out_dir) / name).string());
  }
  write_manifest((fs::path(out_dir) / "manifest.json").string(), "gen-maps",
                 cfg, {{"kind", kind_name}, {"count", count}, {"seed", seed}});
  std::cout << "wrote " << count << " " << kind_name << " maps to " << out_dir
            << "\n";
  return 0;
}

int cmd_gen_expert(const CommonOpts& common, size_t instances, uint64_t seed,
                   const std::string& out_path) {
  mapf::ConfigMap cfg = resolve_config(common);
  mapf::DdgConfig d = ddg_from(cfg);
  mapf::FieldCache cache;

  std::mt19937 rng(static_cast<uint32_t>(mapf::fnv1a(&seed, sizeof(seed))));
  std::vector<mapf::Sample> samples;
  size_t solved = 0, failed = 0;

  for (size_t i = 0; i < instances; ++i) {
    mapf::MapKind kind =
        mapf::training_map_kind(rng, d.random_map_fraction);
    mapf::MAPFInstance inst =
        mapf::generate_instance(kind, d.num_agents, seed + 1 + i, d.map_side);
    mapf::SolveResult res = mapf::solve(inst, d.accurate_budget, cache);
    if (res.status != mapf::SolveStatus::Solved) {
      ++failed;
      continue;
    }
    ++solved;
    auto batch =
        mapf::harvest(inst, res.solution, res.solution.length(),
                      d.harvest_include_settled, cache, 0, 0);
    samples.insert(samples.end(), batch.begin(), batch.end());
  }

  mapf::save_shard(samples, out_path);
  write_manifest(out_path + ".manifest.json", "gen-expert", cfg,
                 {{"instances", instances},
                  {"solved", solved},
                  {"failed", failed},
                  {"samples", samples.size()},
                  {"seed", seed}});
  std::cout << "expert shard: " << samples.size() << " samples from " << solved
            << "/" << instances << " solved instances -> " << out_path << "\n";
  return 0;
}

int cmd_generation_phase(const CommonOpts& common, bool dagger, uint64_t seed,
                         const std::string& params_path,
                         const std::string& out_path) {
  mapf::ConfigMap cfg = resolve_config(common);
  mapf::DdgConfig d = ddg_from(cfg);
  mapf::FieldCache cache;

  mapf::LinearPolicy policy(load_or_zero(params_path), true);
  mapf::SampleRing ring(d.generation_target);
  mapf::PhaseStats stats =
      dagger ? mapf::run_dagger_phase(policy, d, cache, ring, seed, 0)
             : mapf::run_generation_phase(policy, d, cache, ring, seed, 0);

  mapf::save_shard(ring.snapshot(), out_path);
  json extra = {{"mode", dagger ? "dagger" : "ddg"},
                {"seed", seed},
                {"stats", stats_json(stats)}};
  write_manifest(out_path + ".manifest.json",
                 dagger ? "dagger-run" : "ddg-run", cfg, extra);
  std::cout << (dagger ? "dagger" : "ddg") << " phase: " << ring.size()
            << " samples, " << stats.episodes << " episodes, "
            << stats.expert_calls << " expert calls -> " << out_path << "\n";
  return 0;
}

int cmd_train(const CommonOpts& common, const std::string& expert_path,
              const std::string& gen_path, const std::string& val_path,
              const std::string& params_in, const std::string& params_out,
              const std::string& curves_path) {
  mapf::ConfigMap cfg = resolve_config(common);
  mapf::TrainConfig tc = train_from(cfg);

  std::vector<mapf::Sample> expert = mapf::load_shard(expert_path);
  std::vector<mapf::Sample> gen;
  if (!gen_path.empty()) gen = mapf::load_shard(gen_path);
  mapf::SampleRing ring(gen.empty() ? 1 : gen.size());
  ring.add(gen);

  mapf::PolicyParams params =
      params_in.empty() ? mapf::PolicyParams() : mapf::load_params(params_in);
  mapf::TrainReport report;
  params = mapf::fine_tune(std::move(params), ring, expert, tc, &report);
  mapf::save_params(params, params_out);

  json extra = {{"expert_samples", expert.size()},
                {"gen_samples", gen.size()},
                {"final_loss", report.final_loss},
                {"gen_share", report.gen_share},
                {"seed", tc.seed}};
  if (!val_path.empty()) {
    auto val = mapf::load_shard(val_path);
    auto vm = mapf::validation_metrics(params, val);
    extra["val_loss"] = vm.loss;
    extra["val_accuracy"] = vm.accuracy;
    std::cout << "val loss " << vm.loss << ", val accuracy " << vm.accuracy
              << "\n";
  }
  if (!curves_path.empty()) {
    std::string csv = "iteration,train_loss\n";
    for (size_t i = 0; i < report.losses.size(); ++i) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i + 1, report.losses[i]);
      csv += buf;
    }
    mapf::write_text_file(curves_path, csv);
  }
  write_manifest(params_out + ".manifest.json", "train", cfg, extra);
  std::cout << "trained " << tc.iterations << " iterations, final loss "
            << report.final_loss << " -> " << params_out << "\n";
  return 0;
}

int cmd_eval(const CommonOpts& common, const std::string& policy_name,
             const std::string& params_path, const std::string& out_dir) {
  mapf::ConfigMap cfg = resolve_config(common);
  ensure_dir(out_dir);

  auto policy = make_policy(policy_name, params_path);
  mapf::SuiteSpec spec = mapf::default_suite(
      cfg.get_int("eval.episodes_per_kind", 10), cfg.get_int("eval.agents", 8),
      cfg.get_int("eval.seed", 1));
  spec.expert_budget.time_limit_ms = cfg.get_int("eval.expert_time_ms", 10'000);
  spec.expert_budget.node_limit = cfg.get_int("eval.expert_nodes", 0);

  mapf::FieldCache cache;
  mapf::SuiteReport report = mapf::run_suite(*policy, spec, cache);

  mapf::write_text_file((fs::path(out_dir) / "episodes.csv").string(),
                        mapf::episodes_csv(report));
  mapf::write_text_file((fs::path(out_dir) / "aggregates.csv").string(),
                        mapf::aggregates_csv(report));

  json agg = json::array();
  for (const auto& a : report.aggregates)
    agg.push_back({{"map", mapf::to_string(a.kind)},
                   {"episodes", a.episodes},
                   {"success_rate", a.success_rate},
                   {"independent_success_rate", a.independent_success_rate},
                   {"mean_soc_ratio", a.mean_soc_ratio},
                   {"ratio_excluded", a.ratio_excluded}});
  write_manifest((fs::path(out_dir) / "manifest.json").string(), "eval", cfg,
                 {{"policy", policy->name()}, {"aggregates", agg}});

  for (const auto& a : report.aggregates)
    std::cout << mapf::to_string(a.kind) << ": success "
              << a.success_rate * 100 << "%, independent "
              << a.independent_success_rate * 100 << "%, soc ratio "
              << a.mean_soc_ratio << " (" << a.ratio_excluded << " excluded)\n";
  return 0;
}

int cmd_bench(const CommonOpts& common, const std::string& policy_name,
              const std::string& params_path, int side, int cap,
              std::vector<size_t> counts, size_t steps, uint64_t seed,
              const std::string& out_dir) {
  mapf::ConfigMap cfg = resolve_config(common);
  ensure_dir(out_dir);

  auto policy = make_policy(policy_name, params_path);
  mapf::FieldCache cache;
  auto rows = mapf::scalability_bench(*policy, side, counts, cap, steps, seed,
                                      cache);
  mapf::ScalingFit fit = mapf::fit_scaling(rows);

  mapf::write_text_file((fs::path(out_dir) / "bench.csv").string(),
                        mapf::bench_csv(rows));
  write_manifest((fs::path(out_dir) / "manifest.json").string(), "bench", cfg,
                 {{"policy", policy->name()},
                  {"side", side},
                  {"distance_cap", cap},
                  {"seed", seed},
                  {"r_squared", fit.r_squared},
                  {"decision_spread", fit.decision_spread}});

  for (const auto& r : rows)
    std::cout << r.agents << " agents: " << r.total_ms << " ms, "
              << r.mean_decision_us << " us/decision, independent success "
              << r.independent_success_rate << "\n";
  std::cout << "time-vs-agents R^2 " << fit.r_squared << ", decision spread "
            << fit.decision_spread << "\n";
  return 0;
}

int cmd_ablate(const CommonOpts& common, const std::string& expert_path,
               const std::string& val_path, const std::string& modes_arg,
               const std::string& out_dir) {
  mapf::ConfigMap cfg = resolve_config(common);
  ensure_dir(out_dir);

  std::vector<mapf::TrainMode> modes;
  std::istringstream ms(modes_arg);
  std::string tok;
  while (std::getline(ms, tok, ','))
    modes.push_back(mapf::train_mode_from_string(tok));
  if (modes.empty()) throw mapf::SpecInvalidError("no ablation modes given");

  std::vector<mapf::Sample> expert = mapf::load_shard(expert_path);
  std::vector<mapf::Sample> val = mapf::load_shard(val_path);
  std::vector<mapf::MAPFInstance> probes = make_probe_set(cfg);

  mapf::LoopConfig base = loop_from(cfg);
  mapf::FieldCache cache;
  auto runs = mapf::ablation_run(mapf::PolicyParams(), expert, val, probes,
                                 base, modes, cache);

  mapf::write_text_file((fs::path(out_dir) / "curves.csv").string(),
                        mapf::curves_csv(runs));

  json summary = json::array();
  for (const auto& [mode, result] : runs) {
    const mapf::PhaseRecord& last = result.phases.back();
    summary.push_back({{"mode", mapf::to_string(mode)},
                       {"final_val_loss", last.val.loss},
                       {"final_val_accuracy", last.val.accuracy},
                       {"final_success_rate", last.success_rate},
                       {"phases", result.phases.size()}});
    mapf::save_params(result.params,
                      (fs::path(out_dir) /
                       (std::string(mapf::to_string(mode)) + ".params"))
                          .string());
    std::cout << mapf::to_string(mode) << ": val loss " << last.val.loss
              << ", success rate " << last.success_rate << "\n";
  }
  mapf::write_text_file((fs::path(out_dir) / "summary.json").string(),
                        summary.dump(2) + "\n");
  write_manifest((fs::path(out_dir) / "manifest.json").string(), "ablate", cfg,
                 {{"modes", modes_arg}, {"summary", summary}});
  return 0;
}

int cmd_dump_shard(const std::string& path, size_t limit, bool show_tokens) {
  mapf::ShardInfo info = mapf::read_shard_info(path);
  std::cout << "samples " << info.count << ", vocab " << info.vocab
            << ", context " << info.context << ", checksum "
            << hex64(info.checksum) << "\n";
  if (limit == 0) return 0;

  std::vector<mapf::Sample> samples = mapf::load_shard(path);
  for (size_t i = 0; i < samples.size() && i < limit; ++i) {
    const mapf::Sample& s = samples[i];
    std::cout << "[" << i << "] seed " << s.instance_seed << " t " << s.timestep
              << " agent " << s.agent << " phase " << s.phase << " action "
              << mapf::action_name(static_cast<mapf::Action>(s.action))
              << "\n";
    if (show_tokens) std::cout << mapf::describe_tokens(s.tokens);
  }
  return 0;
}

int cmd_token_table() {
  auto table = mapf::token_table();
  for (size_t i = 0; i < table.size(); ++i)
    std::cout << i << "\t" << table[i] << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent pathfinding toolkit: data generation, training, "
               "and evaluation for token-based per-agent policies"};
  app.require_subcommand(1);
  int rc = 0;

  CommonOpts gm_common;
  std::string gm_kind = "maze", gm_out = "maps";
  size_t gm_count = 10;
  uint64_t gm_seed = 1;
  auto* gm = app.add_subcommand("gen-maps", "Generate map files");
  add_common(gm, gm_common);
  gm->add_option("--kind", gm_kind, "random|maze|warehouse|city|empty");
  gm->add_option("--count", gm_count);
  gm->add_option("--seed", gm_seed);
  gm->add_option("--out-dir", gm_out);
  gm->callback(
      [&] { rc = cmd_gen_maps(gm_common, gm_kind, gm_count, gm_seed, gm_out); });

  CommonOpts ge_common;
  std::string ge_out = "expert.shard";
  size_t ge_instances = 100;
  uint64_t ge_seed = 1;
  auto* ge = app.add_subcommand(
      "gen-expert", "Solve fresh instances and bank the full expert plans");
  add_common(ge, ge_common);
  ge->add_option("--instances", ge_instances);
  ge->add_option("--seed", ge_seed);
  ge->add_option("--out", ge_out);
  ge->callback(
      [&] { rc = cmd_gen_expert(ge_common, ge_instances, ge_seed, ge_out); });

  CommonOpts dr_common;
  std::string dr_params, dr_out = "gen.shard";
  uint64_t dr_seed = 1;
  auto* dr = app.add_subcommand(
      "ddg-run", "One generation phase: probe rollout suffixes, re-solve at "
                 "the largest cost jump, harvest the fix");
  add_common(dr, dr_common);
  dr->add_option("--params", dr_params, "Policy parameters to roll out");
  dr->add_option("--seed", dr_seed);
  dr->add_option("--out", dr_out);
  dr->callback([&] {
    rc = cmd_generation_phase(dr_common, false, dr_seed, dr_params, dr_out);
  });

  CommonOpts da_common;
  std::string da_params, da_out = "gen.shard";
  uint64_t da_seed = 1;
  auto* da = app.add_subcommand(
      "dagger-run", "One generation phase: relabel visited states directly");
  add_common(da, da_common);
  da->add_option("--params", da_params, "Policy parameters to roll out");
  da->add_option("--seed", da_seed);
  da->add_option("--out", da_out);
  da->callback([&] {
    rc = cmd_generation_phase(da_common, true, da_seed, da_params, da_out);
  });

  CommonOpts tr_common;
  std::string tr_expert, tr_gen, tr_val, tr_in, tr_out = "model.params",
                                                 tr_curves;
  auto* tr = app.add_subcommand("train", "Minibatch gradient descent on "
                                         "expert and generated shards");
  add_common(tr, tr_common);
  tr->add_option("--expert", tr_expert, "Expert shard")->required();
  tr->add_option("--gen", tr_gen, "Generated shard (optional)");
  tr->add_option("--val", tr_val, "Validation shard (optional)");
  tr->add_option("--params-in", tr_in);
  tr->add_option("--params-out", tr_out);
  tr->add_option("--curves", tr_curves, "Per-iteration loss CSV");
  tr->callback([&] {
    rc = cmd_train(tr_common, tr_expert, tr_gen, tr_val, tr_in, tr_out,
                   tr_curves);
  });

  CommonOpts ev_common;
  std::string ev_policy = "greedy", ev_params, ev_out = "eval_out";
  auto* ev = app.add_subcommand("eval", "Score a policy on the map suite");
  add_common(ev, ev_common);
  ev->add_option("--policy", ev_policy,
                 "greedy|greedy-detour|random|linear|linear-sample");
  ev->add_option("--params", ev_params, "Parameters for linear policies");
  ev->add_option("--out-dir", ev_out);
  ev->callback(
      [&] { rc = cmd_eval(ev_common, ev_policy, ev_params, ev_out); });

  CommonOpts be_common;
  std::string be_policy = "pibt", be_params, be_out = "bench_out";
  int be_side = 512, be_cap = 64;
  std::vector<size_t> be_counts = {1024, 4096, 16384};
  size_t be_steps = 256;
  uint64_t be_seed = 1;
  auto* be = app.add_subcommand(
      "bench", "Scalability run on an empty map with capped travel distance");
  add_common(be, be_common);
  be->add_option("--policy", be_policy);
  be->add_option("--params", be_params);
  be->add_option("--side", be_side);
  be->add_option("--cap", be_cap, "Max start-goal Manhattan distance");
  be->add_option("--counts", be_counts, "Agent counts, one episode each");
  be->add_option("--steps", be_steps);
  be->add_option("--seed", be_seed);
  be->add_option("--out-dir", be_out);
  be->callback([&] {
    rc = cmd_bench(be_common, be_policy, be_params, be_side, be_cap, be_counts,
                   be_steps, be_seed, be_out);
  });

  CommonOpts ab_common;
  std::string ab_expert, ab_val, ab_modes = "plain,dagger,ddg",
                                 ab_out = "ablate_out";
  auto* ab = app.add_subcommand(
      "ablate", "Run the phase loop once per mode with identical seeds");
  add_common(ab, ab_common);
  ab->add_option("--expert", ab_expert)->required();
  ab->add_option("--val", ab_val)->required();
  ab->add_option("--modes", ab_modes);
  ab->add_option("--out-dir", ab_out);
  ab->callback([&] {
    rc = cmd_ablate(ab_common, ab_expert, ab_val, ab_modes, ab_out);
  });

  std::string ds_path;
  size_t ds_limit = 5;
  bool ds_tokens = false;
  auto* ds = app.add_subcommand("dump-shard", "Inspect a sample shard");
  ds->add_option("shard", ds_path)->required();
  ds->add_option("--limit", ds_limit, "Samples to print");
  ds->add_flag("--tokens", ds_tokens, "Print the token rendering too");
  ds->callback([&] { rc = cmd_dump_shard(ds_path, ds_limit, ds_tokens); });

  auto* tt = app.add_subcommand("token-table", "Print the vocabulary");
  tt->callback([&] { rc = cmd_token_table(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const mapf::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const mapf::MapfError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
