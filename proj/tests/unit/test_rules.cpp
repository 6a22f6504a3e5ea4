#include <doctest.h>

#include <random>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/error.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"

using namespace gca;

TEST_CASE("identity rule fixes every configuration") {
  LabeledGraph g = cycle_graph(4);
  GlobalMap map(g, identity_rule(3));
  std::vector<int> states{0, 2, 1, 2};
  CHECK(map.apply(states) == states);
}

TEST_CASE("coloring rule fixes exactly the proper colorings") {
  LabeledGraph g = complete_graph(3);
  GlobalMap map(g, coloring_rule(3));

  std::vector<int> proper{0, 1, 2};
  CHECK(map.apply(proper) == proper);

  std::vector<int> clash{0, 0, 1};
  auto next = map.apply(clash);
  CHECK(next != clash);
  // Only the clashing pair advances (mod 3), the third vertex rests.
  CHECK(next == std::vector<int>{1, 1, 1});
}

TEST_CASE("coloring advance is modular") {
  LabeledGraph g = complete_graph(2);
  GlobalMap map(g, coloring_rule(2));
  std::vector<int> both_one{1, 1};
  CHECK(map.apply(both_one) == std::vector<int>{0, 0});
}

TEST_CASE("connectivity rule has no fixed points and separates components") {
  auto rule = connectivity_rule();
  REQUIRE(rule->states().size() == 5);

  SUBCASE("connected pair never reaches period 6") {
    LabeledGraph g = complete_graph(2);
    GlobalMap map(g, rule);
    auto table = TransitionTable::build(map);
    for (uint64_t c = 0; c < table.size(); ++c) {
      OrbitResult res = orbit(table, c);
      CHECK(res.period != 1);  // no fixed points anywhere
      CHECK(res.period != 6);
    }
  }

  SUBCASE("two isolated vertices reach period 6") {
    LabeledGraph g = build_graph({"o"}, {"u"}, {{"p", "o"}, {"q", "o"}}, {});
    GlobalMap map(g, rule);
    auto table = TransitionTable::build(map);
    bool found6 = false;
    for (uint64_t c = 0; c < table.size(); ++c)
      found6 |= orbit(table, c).period == 6;
    CHECK(found6);
  }
}

TEST_CASE("plain and cayley life agree cell by cell") {
  // Same vertex naming and order on both encodings of the 4x4 torus.
  LabeledGraph moore = moore_torus_graph(4, 4);
  LabeledGraph cayley = torus_graph(4, 4);
  REQUIRE(moore.vertex_ids() == cayley.vertex_ids());

  GlobalMap plain(moore, life_plain_rule());
  GlobalMap twostep(cayley, life_cayley_rule());

  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> states(16);
    for (auto& s : states) s = static_cast<int>(rng() & 1);
    CHECK(plain.apply(states) == twostep.apply(states));
  }
}

TEST_CASE("a blinker blinks") {
  LabeledGraph g = moore_torus_graph(5, 5);
  GlobalMap map(g, life_plain_rule());
  std::vector<int> states(25, 0);
  // Horizontal triple in the middle row.
  auto at = [&](const char* id) { return g.vertex_index(id); };
  states[at("1,2")] = states[at("2,2")] = states[at("3,2")] = 1;

  auto next = map.apply(states);
  std::vector<int> vertical(25, 0);
  vertical[at("2,1")] = vertical[at("2,2")] = vertical[at("2,3")] = 1;
  CHECK(next == vertical);
  CHECK(map.apply(next) == states);
}

TEST_CASE("table rules fall back to the default state") {
  // One entry: label o, center 0 with exactly one u-neighbor in state 1 -> 1.
  WordTable words(1, 1);
  int u = 1;  // the single one-letter word
  TableRule::Entry entry{
      0, CappedMultiset::capped(1, {{0, 0, 1}, {u, 1, 1}}), 1};
  auto rule = std::make_shared<const TableRule>(
      std::vector<std::string>{"0", "1"}, std::vector<std::string>{"o"},
      std::vector<std::string>{"u"}, 1, 1, std::vector<TableRule::Entry>{entry},
      0);

  LabeledGraph g =
      build_graph({"o"}, {"u"}, {{"p", "o"}, {"q", "o"}},
                  {{"p", "q", "u"}, {"q", "p", "u"}});
  GlobalMap map(g, rule);
  CHECK(map.apply(std::vector<int>{0, 1}) == std::vector<int>{1, 0});
  CHECK(map.apply(std::vector<int>{1, 1}) == std::vector<int>{0, 0});
}

TEST_CASE("rule json round trips preserve behavior") {
  LabeledGraph g = complete_graph(3);
  std::mt19937_64 rng(7);
  for (const char* name :
       {"identity:3", "coloring:2", "connectivity", "life_plain"}) {
    auto rule = rule_from_name(name);
    auto back = rule_from_json(rule->to_json());
    GlobalMap a(g, rule), b(g, back);
    int n = static_cast<int>(rule->states().size());
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> states(3);
      for (auto& s : states) s = static_cast<int>(rng() % n);
      CHECK(a.apply(states) == b.apply(states));
    }
  }
}

TEST_CASE("rule_from_name rejects junk") {
  CHECK_THROWS_AS(rule_from_name("identity"), ValidationError);
  CHECK_THROWS_AS(rule_from_name("coloring:1"), ValidationError);
  CHECK_THROWS_AS(rule_from_name("no_such_rule"), ValidationError);
  CHECK(rule_from_name("identity:4")->states().size() == 4);
}

TEST_CASE("state_index resolves names") {
  auto rule = rule_from_name("connectivity");
  CHECK(rule->state_index("a1") == 3);
  CHECK_THROWS_AS(rule->state_index("zz"), ValidationError);
}

TEST_CASE("life cayley pins the four torus labels") {
  auto rule = life_cayley_rule();
  CHECK(rule->required_delta() ==
        std::vector<std::string>{"n", "e", "ni", "ei"});
  // Running it on a graph with the wrong labels is rejected.
  LabeledGraph g = complete_graph(2);
  CHECK_THROWS_AS(GlobalMap(g, rule), ValidationError);
}
