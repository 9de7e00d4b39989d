#include "arena/debate_state.hpp"
#include "arena/predictor.hpp"
#include "arena/prompt.hpp"
#include "arena/strategy.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

using namespace arena;

namespace {

GameState opening_state(std::size_t rounds)
{
  DebateState d;
  d.topic = "Remote work should be the default";
  d.rounds_total = rounds;
  return build_game_state(d);
}

void BM_Minimax(benchmark::State& state)
{
  SearchConfig cfg;
  cfg.depth = static_cast<int>(state.range(0));
  const GameState root = opening_state(7);
  for (auto _ : state) benchmark::DoNotOptimize(minimax_search(root, cfg));
}
BENCHMARK(BM_Minimax)->DenseRange(1, 4);

void BM_Mcts(benchmark::State& state)
{
  SearchConfig cfg;
  cfg.algorithm = SearchAlgorithm::Mcts;
  cfg.mcts_iterations = static_cast<std::size_t>(state.range(0));
  const GameState root = opening_state(3);
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(mcts_search(root, cfg, rng));
  }
}
BENCHMARK(BM_Mcts)->Arg(100)->Arg(1000);

void BM_EvolveGeneration(benchmark::State& state)
{
  GaConfig cfg;
  cfg.population_size = static_cast<std::size_t>(state.range(0));
  const Population pop = init_population(cfg.population_size, 7);
  std::vector<double> fitness;
  for (const auto& m : pop.members) fitness.push_back(m.pathos);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_generation(pop, fitness, cfg, rng));
}
BENCHMARK(BM_EvolveGeneration)->Arg(20)->Arg(200);

void BM_Fnv1a64(benchmark::State& state)
{
  const std::string text(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(fnv1a64(text));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fnv1a64)->Arg(64)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
