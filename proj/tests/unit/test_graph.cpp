#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "gca/error.hpp"
#include "gca/graph_gen.hpp"
#include "gca/labeled_graph.hpp"

using namespace gca;

namespace {

LabeledGraph two_label_path() {
  return build_graph({"a", "b"}, {"u", "w"},
                     {{"p", "a"}, {"q", "b"}, {"r", "a"}},
                     {{"p", "q", "u"}, {"q", "r", "w"}, {"r", "p", "u"}});
}

// Independent connectivity oracle for cross-checking is_connected.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool connected_oracle(const LabeledGraph& g) {
  if (g.vertex_count() == 0) return true;
  UnionFind uf(g.vertex_count());
  for (int d = 0; d < g.delta_count(); ++d)
    for (int v = 0; v < g.vertex_count(); ++v)
      for (int w : g.out(d, v)) uf.unite(v, w);
  for (int v = 1; v < g.vertex_count(); ++v)
    if (uf.find(v) != uf.find(0)) return false;
  return true;
}

}  // namespace

TEST_CASE("build_graph basics and lookups") {
  LabeledGraph g = two_label_path();
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 3);
  CHECK(g.sigma_count() == 2);
  CHECK(g.delta_count() == 2);
  CHECK(g.vertex_index("q") == 1);
  CHECK(g.vertex_index("zzz") == -1);
  CHECK(g.label_of(0) == g.sigma_index("a"));
  CHECK(g.has_edge(g.delta_index("u"), 0, 1));
  CHECK_FALSE(g.has_edge(g.delta_index("w"), 0, 1));
  CHECK(g.sym_neighbors(0) == std::vector<int>{1, 2});
}

TEST_CASE("build_graph rejects malformed input by name") {
  CHECK_THROWS_WITH_AS(
      build_graph({"a"}, {"u"}, {{"p", "nope"}}, {}),
      doctest::Contains("nope"), ValidationError);
  CHECK_THROWS_WITH_AS(
      build_graph({"a"}, {"u"}, {{"p", "a"}, {"p", "a"}}, {}),
      doctest::Contains("p"), ValidationError);
  CHECK_THROWS_WITH_AS(
      build_graph({"a"}, {"u"}, {{"p", "a"}}, {{"p", "ghost", "u"}}),
      doctest::Contains("ghost"), ValidationError);
  CHECK_THROWS_AS(build_graph({"a"}, {"u"}, {{"p", "a"}},
                              {{"p", "p", "u"}, {"p", "p", "u"}}),
                  ValidationError);
  CHECK_THROWS_AS(build_graph({}, {"u"}, {}, {}), ValidationError);
}

TEST_CASE("json round trip preserves the canonical form") {
  LabeledGraph g = two_label_path();
  LabeledGraph back = LabeledGraph::from_json(g.to_json());
  CHECK(back == g);
  CHECK(back.canonical_string() == g.canonical_string());
}

TEST_CASE("reach walks words and respects direction") {
  LabeledGraph g = two_label_path();
  int u = g.delta_index("u"), w = g.delta_index("w");

  std::vector<int> empty;
  CHECK(reach(g, 0, empty).elements() == std::vector<int>{0});

  std::vector<int> uw{u, w};
  CHECK(reach(g, 0, uw).elements() == std::vector<int>{2});

  // Direction matters: u-edges leave p and r, none enters p except r's.
  std::vector<int> just_u{u};
  CHECK(reach(g, 1, just_u).empty());
  CHECK(reach(g, 1, just_u, /*symmetric=*/true).elements() ==
        std::vector<int>{0});
}

TEST_CASE("reach respects concatenation on enumerated graphs") {
  // reach(v, w1·w2) = union over u in reach(v,w1) of reach(u,w2).
  auto graphs = enumerate_graphs(2, 1, 2);
  std::vector<std::vector<int>> words = {{}, {0}, {1}, {0, 1}, {1, 0}};
  for (const auto& g : graphs)
    for (int v = 0; v < g.vertex_count(); ++v)
      for (const auto& w1 : words)
        for (const auto& w2 : words) {
          std::vector<int> cat = w1;
          cat.insert(cat.end(), w2.begin(), w2.end());
          VertexSet direct = reach(g, v, cat);
          VertexSet stitched(g.vertex_count());
          for (int mid : reach(g, v, w1).elements())
            for (int end : reach(g, mid, w2).elements())
              stitched.set(end);
          CHECK(direct == stitched);
        }
}

TEST_CASE("is_connected matches the union-find oracle on all small graphs") {
  for (const auto& g : enumerate_graphs(3, 1, 1))
    CHECK(is_connected(g) == connected_oracle(g));
  for (const auto& g : enumerate_graphs(2, 2, 2))
    CHECK(is_connected(g) == connected_oracle(g));
}

TEST_CASE("enumeration counts match the closed forms") {
  // Simple digraphs on n labeled vertices with one vertex and one edge
  // label: 2^(n^2) edge subsets.
  CHECK(enumerate_graphs(1, 1, 1).size() == 2);
  CHECK(enumerate_graphs(2, 1, 1).size() == 18);
  CHECK(enumerate_graphs(3, 1, 1).size() == 530);
  // Two edge labels double the exponent, two vertex labels multiply by 2^n.
  CHECK(enumerate_graphs(2, 1, 2).size() == 2 + 256);
  CHECK(enumerate_graphs(2, 2, 1).size() == 2 * 2 + 4 * 16);
  // Symmetric graphs with loops: 2^(n(n+1)/2).
  CHECK(enumerate_symmetric_graphs(3).size() == 2 + 8 + 64);
}

TEST_CASE("enumeration is deterministic and duplicate-free") {
  auto a = enumerate_graphs(3, 1, 1);
  auto b = enumerate_graphs(3, 1, 1);
  REQUIRE(a.size() == b.size());
  std::set<std::string> seen;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(seen.insert(a[i].canonical_string()).second);
  }
}

TEST_CASE("enumeration bound rejects runaway requests") {
  CHECK_THROWS_AS(enumerate_graphs(5, 1, 1), ValidationError);
  CHECK(enumerate_graphs(5, 1, 1, 5).size() > 0);
}

TEST_CASE("cyclic product group tables are groups") {
  GroupTable z6 = GroupTable::cyclic_product({6});
  CHECK(z6.check() == 0);
  GroupTable z23 = GroupTable::cyclic_product({2, 3});
  CHECK(z23.order() == 6);
  CHECK(z23.check() == 0);

  GroupTable broken = z6;
  broken.mul[1][1] = 1;  // 1*1 = 1 kills cancellation
  CHECK_THROWS_AS(broken.check(), ValidationError);
}

TEST_CASE("cayley tori have the expected shape") {
  LabeledGraph t = torus_graph(3, 4);
  CHECK(t.vertex_count() == 12);
  CHECK(t.delta_count() == 4);  // n, e, ni, ei
  // Every vertex has exactly one out-edge per generator.
  for (int v = 0; v < t.vertex_count(); ++v)
    for (int d = 0; d < t.delta_count(); ++d)
      CHECK(t.out(d, v).size() == 1);
  CHECK(is_connected(t));

  LabeledGraph c = cycle_graph(5);
  CHECK(c.vertex_count() == 5);
  CHECK(c.delta_count() == 2);  // g, gi
  int gi = c.delta_index("gi");
  REQUIRE(gi >= 0);
  // gi is the inverse of g.
  int gl = c.delta_index("g");
  for (int v = 0; v < 5; ++v) {
    int succ = c.out(gl, v)[0];
    CHECK(c.out(gi, succ)[0] == v);
  }
}

TEST_CASE("moore torus carries all eight neighbors symmetrically") {
  LabeledGraph m = moore_torus_graph(4, 4);
  CHECK(m.vertex_count() == 16);
  CHECK(m.delta_count() == 1);
  for (int v = 0; v < m.vertex_count(); ++v) {
    CHECK(m.sym_neighbors(v).size() == 8);
    // Symmetric: u-edges come in pairs.
    for (int w : m.out(0, v)) {
      auto back = m.out(0, w);
      CHECK(std::find(back.begin(), back.end(), v) != back.end());
    }
  }
  // 3x3 wraps onto itself: each cell still sees all 8 others.
  LabeledGraph m3 = moore_torus_graph(3, 3);
  for (int v = 0; v < 9; ++v) CHECK(m3.sym_neighbors(v).size() == 8);
}

TEST_CASE("vertex sets pack into masks") {
  VertexSet s(5);
  s.set(0);
  s.set(3);
  CHECK(s.count() == 2);
  CHECK(s.mask64() == 0b01001);
  CHECK(VertexSet::from_mask(5, 0b01001) == s);
  s.set(3, false);
  CHECK(s.elements() == std::vector<int>{0});
}
