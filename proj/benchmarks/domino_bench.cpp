#include <benchmark/benchmark.h>

#include "gca/domino.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"

namespace {

gca::DominoSpec checkerboard() {
  gca::DominoSpec d;
  d.states = {"b", "w"};
  d.pairs["n"] = {{0, 1}, {1, 0}};
  d.pairs["e"] = {{0, 1}, {1, 0}};
  d.pairs["ni"] = {{0, 1}, {1, 0}};
  d.pairs["ei"] = {{0, 1}, {1, 0}};
  return d;
}

void BM_DominoSolve(benchmark::State& state) {
  int side = static_cast<int>(state.range(0));
  gca::LabeledGraph g = gca::torus_graph(side, side);
  gca::DominoSpec d = checkerboard();
  for (auto _ : state) {
    auto found = gca::solve_domino(g, d);
    benchmark::DoNotOptimize(found.has_value());
  }
}
BENCHMARK(BM_DominoSolve)->Arg(4)->Arg(8)->Arg(12);

void BM_RuleToDomino(benchmark::State& state) {
  auto rule = gca::rule_from_name("coloring:2");
  std::vector<int> sides{5, 5};
  for (auto _ : state) {
    auto d = gca::rule_to_domino(rule, sides);
    benchmark::DoNotOptimize(d.states.size());
  }
}
BENCHMARK(BM_RuleToDomino)->Unit(benchmark::kMillisecond);

}  // namespace
