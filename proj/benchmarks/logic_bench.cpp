#include <benchmark/benchmark.h>

#include "gca/config_space.hpp"
#include "gca/fo.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"
#include "gca/mso.hpp"

namespace {

// Set quantifier + nested vertex quantifiers; memoization keeps this from
// being 2^n * n^2 evaluations of the body.
void BM_MsoCheck(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  gca::LabeledGraph g = gca::cycle_graph(n);
  gca::MsoFormula f = gca::parse_mso(
      "exists X. forall x. (x in X | (exists y. (edge[g](x,y) & y in X)))");
  for (auto _ : state) benchmark::DoNotOptimize(gca::mso_check(g, f));
}
BENCHMARK(BM_MsoCheck)->Arg(8)->Arg(10)->Arg(12);

void BM_FoCheckCounting(benchmark::State& state) {
  gca::LabeledGraph g = gca::torus_graph(4, 4);
  gca::GlobalMap map(g, gca::rule_from_name("coloring:2"));
  auto table = gca::TransitionTable::build(map);
  gca::FoFormula f =
      gca::parse_fo("forall x. (npre(x) > 0 => npre(x) = 1)");
  for (auto _ : state) benchmark::DoNotOptimize(gca::fo_check(table, f));
  state.SetItemsProcessed(state.iterations() * table.size());
}
BENCHMARK(BM_FoCheckCounting)->Unit(benchmark::kMillisecond);

void BM_ExpandCounting(benchmark::State& state) {
  gca::FoFormula f = gca::parse_fo(
      "forall x. (npre(x) = 3 | (exists y. y ->{2}!= x & #siblings(x) = 1))");
  for (auto _ : state) benchmark::DoNotOptimize(gca::expand_counting(f));
}
BENCHMARK(BM_ExpandCounting);

}  // namespace
