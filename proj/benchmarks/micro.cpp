#include <benchmark/benchmark.h>

#include <unordered_set>

#include "mapf/ddg.hpp"
#include "mapf/eval.hpp"
#include "mapf/pibt.hpp"

namespace {

mapf::MAPFInstance maze_instance(size_t agents) {
  return mapf::generate_instance(mapf::MapKind::Maze, agents, 42);
}

void BM_DistanceField(benchmark::State& state) {
  std::mt19937 rng(1);
  mapf::GridMap map = mapf::generate_map(mapf::MapKind::City, rng);
  mapf::Cell goal{1, 1};
  for (auto _ : state) {
    mapf::DistanceField field(map, goal);
    benchmark::DoNotOptimize(field.at(mapf::Cell{62, 62}));
  }
}
BENCHMARK(BM_DistanceField);

void BM_BuildObservation(benchmark::State& state) {
  mapf::MAPFInstance inst = maze_instance(8);
  mapf::FieldCache cache;
  std::vector<std::shared_ptr<const mapf::DistanceField>> fields;
  for (auto g : inst.goals) fields.push_back(cache.get(inst.map, g));
  std::vector<mapf::ActionHistory> hist(8, mapf::empty_history());
  for (auto _ : state) {
    auto obs = mapf::build_observation(inst.map, inst.starts, inst.goals, hist,
                                       *fields[0], 0);
    benchmark::DoNotOptimize(obs);
  }
}
BENCHMARK(BM_BuildObservation);

void BM_Tokenize(benchmark::State& state) {
  mapf::MAPFInstance inst = maze_instance(8);
  mapf::FieldCache cache;
  std::vector<std::shared_ptr<const mapf::DistanceField>> fields;
  for (auto g : inst.goals) fields.push_back(cache.get(inst.map, g));
  std::vector<mapf::ActionHistory> hist(8, mapf::empty_history());
  auto obs = mapf::build_observation(inst.map, inst.starts, inst.goals, hist,
                                     *fields[0], 0);
  for (auto _ : state) {
    auto seq = mapf::tokenize(obs);
    benchmark::DoNotOptimize(seq);
  }
}
BENCHMARK(BM_Tokenize);

void BM_ExecuteStep(benchmark::State& state) {
  const size_t n = state.range(0);
  std::mt19937 rng(7);
  mapf::GridMap map(64, 64);
  mapf::Config config;
  std::unordered_set<size_t> used;
  while (config.size() < n) {
    size_t idx = mapf::rand_index(rng, map.size());
    if (used.insert(idx).second) config.push_back(map.cell(idx));
  }
  std::vector<mapf::Action> moves(n);
  for (auto _ : state) {
    for (size_t i = 0; i < n; ++i)
      moves[i] = static_cast<mapf::Action>(mapf::rand_index(rng, 5));
    auto res = mapf::step(map, config, moves, mapf::StepMode::Execute);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_ExecuteStep)->Arg(64)->Arg(512);

void BM_PibtBuild(benchmark::State& state) {
  mapf::MAPFInstance inst = maze_instance(12);
  mapf::FieldCache cache;
  std::vector<std::shared_ptr<const mapf::DistanceField>> fields;
  for (auto g : inst.goals) fields.push_back(cache.get(inst.map, g));
  mapf::PibtStepper stepper(inst.map, fields);
  auto order = mapf::priority_order(inst.starts, fields);
  for (auto _ : state) {
    auto next = stepper.build(inst.starts, {}, order, nullptr);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_PibtBuild);

void BM_PolicyLogits(benchmark::State& state) {
  mapf::PolicyParams params;
  std::mt19937 rng(3);
  for (auto& w : params.w) w = mapf::rand_unit(rng) - 0.5;
  mapf::TokenSeq seq{};
  for (auto& t : seq)
    t = static_cast<uint8_t>(mapf::rand_index(rng, mapf::kVocabSize));
  for (auto _ : state) {
    auto logits = mapf::policy_logits(params, seq);
    benchmark::DoNotOptimize(logits);
  }
}
BENCHMARK(BM_PolicyLogits);

void BM_SolveMaze(benchmark::State& state) {
  mapf::MAPFInstance inst = maze_instance(8);
  for (auto _ : state) {
    mapf::FieldCache cache;
    auto res = mapf::solve(inst, mapf::SolverBudget{0, 20'000}, cache);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_SolveMaze);

}  // namespace

BENCHMARK_MAIN();
