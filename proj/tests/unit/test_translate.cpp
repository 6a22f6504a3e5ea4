#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/error.hpp"
#include "gca/fo.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"
#include "gca/mso.hpp"
#include "gca/translate.hpp"

using namespace gca;

TEST_CASE("orbit-to-graph translation matches direct checking") {
  std::vector<const char*> formulas = {
      "exists x. x -> x",
      "forall x. exists y. y -> x",
      "exists x. exists y. (x -> y & !(x = y))",
  };
  std::vector<RulePtr> rules = {identity_rule(2), coloring_rule(2)};
  auto graphs = enumerate_graphs(2, 1, 1);

  for (const char* text : formulas) {
    FoFormula phi = parse_fo(text);
    for (const auto& rule : rules) {
      MsoFormula tau = foca_to_mso(phi, rule, {"o"}, {"u"});
      for (const auto& g : graphs) {
        GlobalMap map(g, rule);
        auto table = TransitionTable::build(map);
        CHECK_MESSAGE(fo_check(table, phi) == mso_check(g, tau), text);
      }
    }
  }
}

TEST_CASE("counting atoms must be expanded before translating") {
  auto rule = coloring_rule(2);
  CHECK_THROWS_AS(
      foca_to_mso(parse_fo("exists x. npre(x) = 1"), rule, {"o"}, {"u"}),
      ValidationError);
  CHECK_THROWS_AS(
      foca_to_mso(parse_fo("exists x. exists y. x ~inf y"), rule, {"o"},
                  {"u"}),
      ValidationError);
  // The expanded form goes through.
  MsoFormula tau = foca_to_mso(
      expand_counting(parse_fo("exists x. npre(x) = 1")), rule, {"o"}, {"u"});
  LabeledGraph g = complete_graph(2);
  GlobalMap map(g, rule);
  auto table = TransitionTable::build(map);
  CHECK(mso_check(g, tau) ==
        fo_check(table, parse_fo("exists x. npre(x) = 1")));
}

TEST_CASE("generic rules need explicit alphabets") {
  CHECK_THROWS_AS(foca_to_mso(parse_fo("exists x. x -> x"), coloring_rule(2)),
                  ValidationError);
  // Pinned rules bring their own.
  MsoFormula tau =
      foca_to_mso(parse_fo("exists x. x -> x"), life_cayley_rule());
  CHECK(to_string(tau).find("edge[n]") != std::string::npos);
}

TEST_CASE("graph-to-orbit translation separates loop graphs") {
  MsoToFocaResult r = mso_to_foca(parse_mso("exists x. edge[u](x,x)"));
  CHECK(r.rule->states().size() == 42);
  REQUIRE(r.good.size() == 1);

  LabeledGraph loop =
      build_graph({"o"}, {"u"}, {{"p", "o"}}, {{"p", "p", "u"}});
  LabeledGraph bare = build_graph({"o"}, {"u"}, {{"p", "o"}}, {});
  for (bool expect : {true, false}) {
    const LabeledGraph& g = expect ? loop : bare;
    GlobalMap map(g, r.rule);
    auto table = TransitionTable::build(map);
    CHECK(fo_check(table, r.phi) == expect);
  }
}

TEST_CASE("connected variant works on connected graphs only") {
  MsoFormula psi = parse_mso("exists x. x = x");  // constantly true
  MsoToFocaResult conn = mso_to_foca_connected(psi);
  MsoToFocaResult gen = mso_to_foca(psi);

  LabeledGraph two_islands =
      build_graph({"o"}, {"u"}, {{"p", "o"}, {"q", "o"}}, {});
  GlobalMap cmap(two_islands, conn.rule);
  GlobalMap gmap(two_islands, gen.rule);
  auto ctable = TransitionTable::build(cmap);
  auto gtable = TransitionTable::build(gmap);
  // The connected construction loses synchronization across components;
  // the general one pays for departure gates and keeps the equivalence.
  CHECK_FALSE(fo_check(ctable, conn.phi));
  CHECK(fo_check(gtable, gen.phi));

  LabeledGraph joined = complete_graph(2);
  GlobalMap jmap(joined, conn.rule);
  auto jtable = TransitionTable::build(jmap);
  CHECK(fo_check(jtable, conn.phi));
}

TEST_CASE("the connected formula depends only on the prefix signature") {
  // Same signature (exists,1), different matrices.
  MsoToFocaResult a = mso_to_foca_connected(parse_mso("exists x. x = x"));
  MsoToFocaResult b =
      mso_to_foca_connected(parse_mso("exists x. edge[u](x,x)"));
  CHECK(to_string(a.phi) == to_string(b.phi));

  // Same signature through a merged block: forall x. forall y.
  MsoToFocaResult c = mso_to_foca_connected(
      parse_mso("forall x. forall y. (edge[u](x,y) => edge[u](y,x))"));
  MsoToFocaResult d =
      mso_to_foca_connected(parse_mso("forall x. forall y. x = y"));
  CHECK(to_string(c.phi) == to_string(d.phi));

  // The general variant folds the matrix in, so these differ.
  MsoToFocaResult e = mso_to_foca(parse_mso("exists x. x = x"));
  MsoToFocaResult f = mso_to_foca(parse_mso("exists x. edge[u](x,x)"));
  CHECK(to_string(e.phi) != to_string(f.phi));
}

TEST_CASE("translated rules oscillate between the error states") {
  MsoToFocaResult r = mso_to_foca(parse_mso("exists x. edge[u](x,x)"));
  int e0 = r.rule->state_index("e0");
  int e1 = r.rule->state_index("e1");
  REQUIRE(e0 == 0);
  REQUIRE(e1 == 1);
  LabeledGraph g = complete_graph(2);
  GlobalMap map(g, r.rule);
  std::vector<int> all_e0{e0, e0};
  auto next = map.apply(all_e0);
  CHECK(next == std::vector<int>{e1, e1});
  CHECK(map.apply(next) == all_e0);
}

TEST_CASE("layered state spaces are consistently encoded") {
  MsoToFocaResult r =
      mso_to_foca(parse_mso("forall x. exists y. edge[u](x,y)"));
  const LayeredStateSpace& space = r.space;
  CHECK(space.state_count() == static_cast<int>(r.rule->states().size()));
  CHECK(space.state_names() == r.rule->states());

  std::set<std::string> names(space.state_names().begin(),
                              space.state_names().end());
  CHECK(names.size() == space.state_names().size());

  int layer_states = 0;
  for (int s = 0; s < space.state_count(); ++s) {
    const auto& info = space.info(s);
    if (info.kind != LayeredStateSpace::StateKind::Layer) continue;
    ++layer_states;
    REQUIRE(static_cast<int>(info.values.size()) == info.type);
    // Encoding inverts the per-layer values.
    CHECK(space.encode_layer_state(info.type, info.values) == s);
    // Projection drops the last layer.
    if (info.type > 1) {
      int p = space.project(s);
      REQUIRE(p >= 0);
      const auto& pinfo = space.info(p);
      CHECK(pinfo.type == info.type - 1);
      for (int l = 0; l < pinfo.type; ++l)
        CHECK(pinfo.values[l] == info.values[l]);
    }
  }
  CHECK(layer_states > 0);

  // Gates exist only in the general variant and carry two layers.
  int gates = 0;
  for (int s = 0; s < space.state_count(); ++s)
    if (space.info(s).kind == LayeredStateSpace::StateKind::Gate) ++gates;
  CHECK(gates > 0);
  MsoToFocaResult conn =
      mso_to_foca_connected(parse_mso("forall x. exists y. edge[u](x,y)"));
  for (int s = 0; s < conn.space.state_count(); ++s)
    CHECK(conn.space.info(s).kind != LayeredStateSpace::StateKind::Gate);
}

TEST_CASE("prenexing inside the translation preserves the sentence") {
  MsoFormula psi = parse_mso(
      "forall x. (edge[u](x,x) => exists y. !(y = x))");
  MsoToFocaResult r = mso_to_foca(psi);
  for (const auto& g : enumerate_graphs(2, 1, 1))
    CHECK(mso_check(g, psi) == mso_check(g, r.prenexed));
}

TEST_CASE("translated rule json round trips") {
  MsoToFocaResult r = mso_to_foca(parse_mso("exists x. edge[u](x,x)"));
  Json j = r.rule->to_json();
  CHECK(j.at("kind") == "translated");
  RulePtr back = rule_from_json(j);
  CHECK(back->states() == r.rule->states());

  LabeledGraph g = complete_graph(2);
  GlobalMap orig(g, r.rule), again(g, back);
  auto torig = TransitionTable::build(orig);
  auto tagain = TransitionTable::build(again);
  REQUIRE(torig.size() == tagain.size());
  for (uint64_t c = 0; c < torig.size(); ++c)
    CHECK(torig.successor(c) == tagain.successor(c));
}

TEST_CASE("state budgets cut off oversized alphabets") {
  CHECK_THROWS_AS(
      mso_to_foca(parse_mso("exists X. forall x. x in X"), 10),
      BudgetError);
}

TEST_CASE("good formulas chain through the block prefix") {
  MsoToFocaResult r =
      mso_to_foca(parse_mso("exists X. forall x. (x in X | edge[u](x,x))"));
  // Degrouped general translation: one good formula per quantifier block.
  CHECK(r.good.size() == 2);
  // good_i has y1..yi free.
  for (size_t i = 0; i < r.good.size(); ++i) {
    auto fv = free_vars(r.good[i]);
    CHECK(fv.size() == i + 1);
  }
  auto tv = free_vars(r.truth);
  REQUIRE(tv.size() == 1);
  CHECK(tv[0] == "y" + std::to_string(r.good.size()));
}
