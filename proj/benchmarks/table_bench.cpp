#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gca/config_space.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"

namespace {

// 2^16 configurations: large enough that the per-config cost dominates,
// small enough for a tight iteration loop.
void BM_TableBuild(benchmark::State& state) {
  gca::LabeledGraph g = gca::moore_torus_graph(4, 4);
  gca::GlobalMap map(g, gca::rule_from_name("life_plain"));
  int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto table = gca::TransitionTable::build(
        map, gca::TransitionTable::kDefaultBudget, jobs);
    benchmark::DoNotOptimize(table.size());
  }
  state.SetItemsProcessed(state.iterations() * (uint64_t{1} << 16));
}
BENCHMARK(BM_TableBuild)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LifeStep(benchmark::State& state) {
  int side = static_cast<int>(state.range(0));
  gca::LabeledGraph g = gca::moore_torus_graph(side, side);
  gca::GlobalMap map(g, gca::rule_from_name("life_plain"));
  std::mt19937_64 rng(12345);
  std::vector<int> cur(g.vertex_count()), next(g.vertex_count());
  for (auto& s : cur) s = static_cast<int>(rng() & 1);
  for (auto _ : state) {
    map.apply_into(cur, next);
    std::swap(cur, next);
  }
  state.SetItemsProcessed(state.iterations() * g.vertex_count());
}
BENCHMARK(BM_LifeStep)->Arg(16)->Arg(64)->Arg(256);

void BM_Orbit(benchmark::State& state) {
  gca::LabeledGraph g = gca::moore_torus_graph(4, 4);
  gca::GlobalMap map(g, gca::rule_from_name("life_plain"));
  std::mt19937_64 rng(999);
  std::vector<int> start(g.vertex_count());
  for (auto& s : start) s = static_cast<int>(rng() & 1);
  for (auto _ : state) {
    auto res = gca::orbit(map, start, uint64_t{1} << 20);
    benchmark::DoNotOptimize(res.period);
  }
}
BENCHMARK(BM_Orbit);

}  // namespace
