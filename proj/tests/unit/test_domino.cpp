#include <doctest.h>

#include <set>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/domino.hpp"
#include "gca/error.hpp"
#include "gca/fo.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"

using namespace gca;

namespace {

DominoSpec checkerboard() {
  DominoSpec d;
  d.states = {"b", "w"};
  d.pairs["g"] = {{0, 1}, {1, 0}};
  return d;
}

// All valid configurations by brute force.
std::set<std::vector<int>> all_valid(const LabeledGraph& g,
                                     const DominoSpec& d) {
  std::set<std::vector<int>> out;
  int n = g.vertex_count();
  int k = static_cast<int>(d.states.size());
  std::vector<int> c(n, 0);
  while (true) {
    if (is_valid(g, d, c)) out.insert(c);
    int i = 0;
    while (i < n && ++c[i] == k) c[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace

TEST_CASE("validity reads ordered pairs per label") {
  LabeledGraph g = cycle_graph(3);
  DominoSpec d;
  d.states = {"x", "y"};
  d.pairs["g"] = {{0, 1}};  // every g-edge must go x -> y

  CHECK_FALSE(is_valid(g, d, std::vector<int>{0, 1, 0}));
  // Unconstrained label gi permits anything; g demands strict alternation,
  // impossible on an odd cycle.
  CHECK(all_valid(g, d).empty());

  LabeledGraph two = cycle_graph(2);
  CHECK(is_valid(two, d, std::vector<int>{0, 1}));
  CHECK_FALSE(is_valid(two, d, std::vector<int>{1, 0}));

  DominoSpec empty_list = d;
  empty_list.pairs["gi"] = {};  // explicitly empty: forbids every gi-edge
  CHECK_FALSE(is_valid(two, empty_list, std::vector<int>{0, 1}));
}

TEST_CASE("solver agrees with brute force on small instances") {
  DominoSpec d = checkerboard();
  for (int n = 2; n <= 6; ++n) {
    LabeledGraph g = cycle_graph(n);
    auto valid = all_valid(g, d);
    auto found = solve_domino(g, d);
    CHECK(found.has_value() == !valid.empty());
    if (found) CHECK(valid.count(*found) == 1);
  }
  // Even cycles alternate, odd ones cannot.
  CHECK(solve_domino(cycle_graph(4), d).has_value());
  CHECK_FALSE(solve_domino(cycle_graph(3), d).has_value());
}

TEST_CASE("seeded solving requires the seed state to appear") {
  DominoSpec d;
  d.states = {"a", "b"};
  d.pairs["g"] = {{0, 0}, {1, 1}};  // constant configurations only
  d.s0 = 1;
  LabeledGraph g = cycle_graph(4);
  auto plain = solve_domino(g, d);
  REQUIRE(plain.has_value());
  auto seeded = solve_domino(g, d, /*require_s0=*/true);
  REQUIRE(seeded.has_value());
  CHECK(std::count(seeded->begin(), seeded->end(), 1) == 4);

  d.pairs["g"] = {{0, 0}};  // b can no longer appear anywhere
  CHECK(solve_domino(g, d).has_value());
  CHECK_FALSE(solve_domino(g, d, true).has_value());
}

TEST_CASE("domino rules fix exactly the valid configurations") {
  std::vector<DominoSpec> specs;
  specs.push_back(checkerboard());
  {
    DominoSpec d;
    d.states = {"a"};
    d.pairs["g"] = {};  // unsatisfiable on any graph with a g-edge
    specs.push_back(d);
  }
  {
    DominoSpec d;
    d.states = {"p", "q", "r"};
    d.pairs["g"] = {{0, 1}, {1, 2}, {2, 0}, {0, 0}};
    specs.push_back(d);
  }

  for (const auto& d : specs) {
    for (int n = 2; n <= 4; ++n) {
      LabeledGraph g = cycle_graph(n);
      RulePtr rule = domino_to_rule(d);
      GlobalMap map(g, rule);
      auto valid = all_valid(g, d);
      // Fixed points over the original states must be exactly the valid
      // set, and no fixed point may use helper states.
      auto table = TransitionTable::build(map);
      int k = static_cast<int>(rule->states().size());
      std::vector<int> buf(g.vertex_count());
      std::set<std::vector<int>> fixed;
      for (uint64_t c = 0; c < table.size(); ++c) {
        if (table.successor(c) != c) continue;
        decode_config(c, k, buf);
        fixed.insert(buf);
      }
      std::set<std::vector<int>> expected;
      for (const auto& v : valid) expected.insert(v);
      CHECK(fixed == expected);
    }
  }
}

TEST_CASE("seeded rules add the two-preimage marker") {
  DominoSpec d = checkerboard();
  RulePtr rule = seeded_rule(d, "b");
  // S u {t, e0, e1}
  CHECK(rule->states().size() == 5);

  LabeledGraph g = cycle_graph(4);
  GlobalMap map(g, rule);
  auto table = TransitionTable::build(map);
  int k = static_cast<int>(rule->states().size());
  int b = rule->state_index("b");
  std::vector<int> buf(g.vertex_count());

  FoFormula seeded_form = parse_fo(
      "exists x. exists y. (x -> x & y -> x & !(x = y))");
  bool has_marked_fixed_point = false;
  for (uint64_t c = 0; c < table.size(); ++c) {
    if (table.successor(c) != c) continue;
    decode_config(c, k, buf);
    bool contains_b =
        std::find(buf.begin(), buf.end(), b) != buf.end();
    bool two_preimages = table.predecessor_count(c) >= 2;
    CHECK(contains_b == two_preimages);
    has_marked_fixed_point |= contains_b;
  }
  CHECK(has_marked_fixed_point);
  DominoSpec with_seed = d;
  with_seed.s0 = with_seed.state_index("b");
  CHECK(fo_check(table, seeded_form) ==
        solve_domino(g, with_seed, true).has_value());
}

TEST_CASE("higher-block recoding mirrors fixed points on the cycle") {
  auto rule = coloring_rule(2);
  std::vector<int> sides{4};
  DominoSpec d = rule_to_domino(rule, sides);
  LabeledGraph torus = domino_torus(sides);
  REQUIRE(torus.vertex_count() == 4);

  // The rule has a fixed point on Z4 (alternating colors) and the recoded
  // domino problem must therefore be solvable, and vice versa.
  GlobalMap map(torus, rule);
  auto table = TransitionTable::build(map);
  bool has_fixed = false;
  for (uint64_t c = 0; c < table.size(); ++c)
    has_fixed |= table.successor(c) == c;
  CHECK(has_fixed);
  CHECK(solve_domino(torus, d).has_value() == has_fixed);

  // Z3 has no proper 2-coloring: no fixed point, no valid tiling.
  std::vector<int> odd{3};
  DominoSpec d3 = rule_to_domino(rule, odd);
  LabeledGraph t3 = domino_torus(odd);
  GlobalMap map3(t3, rule);
  auto table3 = TransitionTable::build(map3);
  bool fixed3 = false;
  for (uint64_t c = 0; c < table3.size(); ++c)
    fixed3 |= table3.successor(c) == c;
  CHECK_FALSE(fixed3);
  CHECK(solve_domino(t3, d3).has_value() == fixed3);
}

TEST_CASE("recoding rejects sides that wrap onto the ball") {
  auto rule = coloring_rule(2);  // radius 1
  std::vector<int> too_small{2};
  CHECK_THROWS_AS(rule_to_domino(rule, too_small), ValidationError);
}

TEST_CASE("seeded recoding marks center differences") {
  auto rule = coloring_rule(2);
  std::vector<int> sides{4};
  SeededRecoding rec = rule_to_seeded_domino(rule, sides);
  CHECK_FALSE(rec.markers.empty());
  LabeledGraph torus = domino_torus(sides);

  GlobalMap map(torus, rule);
  auto table = TransitionTable::build(map);
  FoFormula seeded_form = parse_fo(
      "exists x. exists y. (x -> x & y -> x & !(x = y))");
  bool direct = fo_check(table, seeded_form);

  bool any_marker = false;
  for (const auto& m : rec.markers) {
    DominoSpec with_seed = rec.spec;
    with_seed.s0 = with_seed.state_index(m);
    any_marker |= solve_domino(torus, with_seed, true).has_value();
    if (any_marker) break;
  }
  CHECK(direct == any_marker);
}

TEST_CASE("domino spec json round trips") {
  DominoSpec d = checkerboard();
  d.s0 = 1;
  DominoSpec back = DominoSpec::from_json(d.to_json());
  CHECK(back.states == d.states);
  CHECK(back.pairs == d.pairs);
  CHECK(back.s0 == d.s0);
}

TEST_CASE("domino-backed rule json round trips") {
  DominoSpec d = checkerboard();
  RulePtr rule = domino_to_rule(d);
  RulePtr back = rule_from_json(rule->to_json());
  LabeledGraph g = cycle_graph(4);
  GlobalMap a(g, rule), b(g, back);
  auto ta = TransitionTable::build(a);
  auto tb = TransitionTable::build(b);
  REQUIRE(ta.size() == tb.size());
  for (uint64_t c = 0; c < ta.size(); ++c)
    CHECK(ta.successor(c) == tb.successor(c));
}
