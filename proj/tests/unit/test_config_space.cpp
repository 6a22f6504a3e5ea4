#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <random>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/error.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"

using namespace gca;

TEST_CASE("configuration indices are a mixed-radix bijection") {
  CHECK(config_count(3, 4) == 81);
  CHECK(config_count(1, 10) == 1);
  std::vector<int> buf(4);
  for (uint64_t c = 0; c < 81; ++c) {
    decode_config(c, 3, buf);
    CHECK(config_index(buf, 3) == c);
  }
  // Vertex 0 is the least significant digit.
  decode_config(1, 3, buf);
  CHECK(buf == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("tables agree with direct application") {
  LabeledGraph g = complete_graph(3);
  GlobalMap map(g, coloring_rule(3));
  auto table = TransitionTable::build(map);
  REQUIRE(table.size() == 27);
  std::vector<int> buf(3);
  for (uint64_t c = 0; c < table.size(); ++c) {
    decode_config(c, 3, buf);
    CHECK(table.successor(c) == config_index(map.apply(buf), 3));
  }
}

TEST_CASE("predecessor lists invert the successor array") {
  LabeledGraph g = cycle_graph(4);
  GlobalMap map(g, coloring_rule(2));
  auto table = TransitionTable::build(map);
  uint64_t total = 0;
  for (uint64_t c = 0; c < table.size(); ++c) {
    for (uint64_t p : table.predecessors(c)) CHECK(table.successor(p) == c);
    total += table.predecessors(c).size();
  }
  CHECK(total == table.size());
}

TEST_CASE("parallel builds are identical to serial ones") {
  LabeledGraph g = moore_torus_graph(3, 3);
  GlobalMap map(g, life_plain_rule());
  auto serial = TransitionTable::build(map);
  auto parallel = TransitionTable::build(
      map, TransitionTable::kDefaultBudget, 4);
  REQUIRE(serial.size() == parallel.size());
  for (uint64_t c = 0; c < serial.size(); ++c)
    CHECK(serial.successor(c) == parallel.successor(c));
}

TEST_CASE("budget violations are rejected with the size in the message") {
  LabeledGraph g = complete_graph(4);
  GlobalMap map(g, coloring_rule(3));
  CHECK_THROWS_WITH_AS(TransitionTable::build(map, 80),
                       doctest::Contains("81"), BudgetError);
}

TEST_CASE("cache round trips reproduce the table") {
  namespace fs = std::filesystem;
  fs::path dir =
      fs::temp_directory_path() / ("gca-cache-test-" + std::to_string(::getpid()));
  fs::remove_all(dir);

  LabeledGraph g = cycle_graph(4);
  GlobalMap map(g, coloring_rule(2));
  auto cold = TransitionTable::build(map, TransitionTable::kDefaultBudget, 1,
                                     dir.string());
  CHECK_FALSE(cold.loaded_from_cache());
  auto warm = TransitionTable::build(map, TransitionTable::kDefaultBudget, 1,
                                     dir.string());
  CHECK(warm.loaded_from_cache());
  REQUIRE(warm.size() == cold.size());
  for (uint64_t c = 0; c < cold.size(); ++c) {
    CHECK(warm.successor(c) == cold.successor(c));
    CHECK(warm.predecessors(c).size() == cold.predecessors(c).size());
  }

  // A different rule on the same graph must miss the cache.
  GlobalMap other(g, coloring_rule(3));
  auto miss = TransitionTable::build(other, TransitionTable::kDefaultBudget, 1,
                                     dir.string());
  CHECK_FALSE(miss.loaded_from_cache());

  fs::remove_all(dir);
}

TEST_CASE("orbits report transients and periods") {
  LabeledGraph g = complete_graph(3);

  SUBCASE("identity orbits are fixed points") {
    GlobalMap map(g, identity_rule(2));
    auto table = TransitionTable::build(map);
    for (uint64_t c = 0; c < table.size(); ++c) {
      OrbitResult res = orbit(table, c);
      CHECK(res.conclusive);
      CHECK(res.transient == 0);
      CHECK(res.period == 1);
      CHECK(res.sequence == std::vector<uint64_t>{c});
    }
  }

  SUBCASE("K3 two-coloring oscillates") {
    GlobalMap map(g, coloring_rule(2));
    auto table = TransitionTable::build(map);
    // All-equal configurations flip forever.
    uint64_t all0 = 0;
    OrbitResult res = orbit(table, all0);
    CHECK(res.transient == 0);
    CHECK(res.period == 2);
  }
}

TEST_CASE("direct orbits agree with table orbits") {
  LabeledGraph g = moore_torus_graph(3, 3);
  GlobalMap map(g, life_plain_rule());
  auto table = TransitionTable::build(map);
  std::mt19937_64 rng(31337);
  std::vector<int> start(9);
  for (int trial = 0; trial < 25; ++trial) {
    for (auto& s : start) s = static_cast<int>(rng() & 1);
    OrbitResult direct = orbit(map, start, uint64_t{1} << 12);
    OrbitResult tabled = orbit(table, config_index(start, 2));
    REQUIRE(direct.conclusive);
    CHECK(direct.transient == tabled.transient);
    CHECK(direct.period == tabled.period);
    CHECK(direct.sequence == tabled.sequence);
  }
}

TEST_CASE("direct orbits give up politely") {
  LabeledGraph g = cycle_graph(5);
  GlobalMap map(g, coloring_rule(3));
  std::vector<int> start{0, 1, 2, 0, 1};
  OrbitResult res = orbit(map, start, 1);
  CHECK_FALSE(res.conclusive);
}

TEST_CASE("state parsing round trips and rejects strangers") {
  LabeledGraph g = cycle_graph(3);
  GlobalMap map(g, connectivity_rule());
  auto states = map.parse_states("0,a1,a2");
  CHECK(states == std::vector<int>{0, 3, 4});
  CHECK(map.format_states(states) == "0,a1,a2");
  CHECK_THROWS_AS(map.parse_states("0,zz,a2"), ValidationError);
  CHECK_THROWS_AS(map.parse_states("0,1"), ValidationError);
}
