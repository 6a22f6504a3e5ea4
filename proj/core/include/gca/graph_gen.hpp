#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gca/labeled_graph.hpp"

namespace gca {

/// Multiplication table of a finite group candidate.  mul[a][b] is the index
/// of a*b.  check() rejects non-groups naming the failed axiom.
struct GroupTable {
  std::vector<std::string> element_names;
  std::vector<std::vector<int>> mul;

  int order() const { return static_cast<int>(element_names.size()); }
  /// Returns the identity element index; throws ValidationError naming the
  /// first violated group axiom otherwise.
  int check() const;

  /// Direct product Z_d0 x Z_d1 x ... with elements named "i,j,...".
  static GroupTable cyclic_product(const std::vector<int>& dims);
};

struct Generator {
  std::string label;    // edge label in the resulting graph
  std::string element;  // group element name
};

/// Cayley graph: vertex set = group elements (table order), one edge
/// (g, g*d) per generator d.  Vertices all carry the single sigma label.
LabeledGraph cayley_graph(const GroupTable& table, const std::vector<Generator>& generators,
                          const std::string& sigma_label = "o");

/// 2-D torus Z_w x Z_h as a Cayley graph with generators n=(0,1), e=(1,0)
/// and their inverses ni, ei.  Vertices are named "x,y".
LabeledGraph torus_graph(int w, int h);

/// 1-D torus (cycle) Z_n with generators g and gi.
LabeledGraph cycle_graph(int n);

/// d-dimensional torus with generator labels g0,g0i,g1,g1i,...
LabeledGraph torus_graph_nd(const std::vector<int>& sides);

/// w x h torus with plain Moore adjacency: a single edge label "u" and a
/// symmetric edge to each of the 8 surrounding cells (deduplicated when the
/// torus wraps onto itself).  Vertex names match torus_graph.
LabeledGraph moore_torus_graph(int w, int h);

/// Complete graph on n vertices (single label "u", symmetric, no loops).
LabeledGraph complete_graph(int n);

inline constexpr int kDefaultEnumerationBound = 4;

/// Streams every simple labeled graph with 1..max_vertices vertices over
/// auto-named alphabets of the requested sizes (|sigma| = 1 uses "o",
/// |delta| = 1 uses "u").  max_vertices = 0 yields just the empty graph.
/// Deterministic order: vertex count ascending, then vertex labeling as a
/// mixed-radix number, then the edge subset as a bit mask ordered by
/// (delta, from, to).  Rejects max_vertices > bound.
void enumerate_graphs(int max_vertices, int sigma_size, int delta_size,
                      const std::function<void(const LabeledGraph&)>& yield,
                      int bound = kDefaultEnumerationBound);

std::vector<LabeledGraph> enumerate_graphs(int max_vertices, int sigma_size,
                                           int delta_size,
                                           int bound = kDefaultEnumerationBound);

/// Streams every graph with a symmetric edge relation (loops allowed) on
/// 1..max_vertices vertices, single labels "o"/"u".  Each unordered pair is a
/// single bit; both directed edges are emitted for distinct endpoints.
void enumerate_symmetric_graphs(int max_vertices,
                                const std::function<void(const LabeledGraph&)>& yield,
                                int bound = 5);

std::vector<std::string> auto_sigma(int size);
std::vector<std::string> auto_delta(int size);

}  // namespace gca
