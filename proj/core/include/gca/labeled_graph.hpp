#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gca/json.hpp"

namespace gca {

/// Dynamic bitset over the vertex range of a fixed graph.
class VertexSet {
public:
  VertexSet() = default;
  explicit VertexSet(int universe);

  int universe_size() const { return n_; }
  bool test(int v) const;
  void set(int v, bool value = true);
  int count() const;
  bool empty() const { return count() == 0; }
  std::vector<int> elements() const;

  /// Packs the set into a 64-bit mask; rejects universes larger than 64.
  uint64_t mask64() const;
  static VertexSet from_mask(int universe, uint64_t mask);

  bool operator==(const VertexSet&) const = default;

private:
  void check(int v) const;

  int n_ = 0;
  std::vector<uint64_t> bits_;
};

struct VertexSpec {
  std::string id;
  std::string label;
};

struct EdgeSpec {
  std::string from;
  std::string to;
  std::string label;
};

/// A finite simple directed graph with totally labeled vertices (alphabet
/// sigma) and edges partitioned by label (alphabet delta).  At most one edge
/// with a given label exists between an ordered pair of vertices; self-loops
/// are allowed.  Vertex order is the insertion order of the build call and is
/// the canonical order used everywhere (configuration indexing, enumeration).
class LabeledGraph {
public:
  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  int sigma_count() const { return static_cast<int>(sigma_.size()); }
  int delta_count() const { return static_cast<int>(delta_.size()); }

  const std::vector<std::string>& sigma() const { return sigma_; }
  const std::vector<std::string>& delta() const { return delta_; }
  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }

  /// Label index of a vertex (into sigma()).
  int label_of(int v) const { return labels_[v]; }

  const std::vector<int>& out(int delta_idx, int v) const {
    return out_[delta_idx][v];
  }
  const std::vector<int>& in(int delta_idx, int v) const {
    return in_[delta_idx][v];
  }
  bool has_edge(int delta_idx, int from, int to) const;
  int edge_count() const;

  /// Neighbors of v ignoring direction and labels (deduplicated, sorted).
  const std::vector<int>& sym_neighbors(int v) const {
    return sym_adj_[v];
  }

  int vertex_index(std::string_view id) const;   // -1 when absent
  int sigma_index(std::string_view label) const; // -1 when absent
  int delta_index(std::string_view label) const; // -1 when absent

  Json to_json() const;
  static LabeledGraph from_json(const Json& j);

  /// Stable serialization used for equality/fingerprints.
  std::string canonical_string() const;

  bool operator==(const LabeledGraph& other) const {
    return canonical_string() == other.canonical_string();
  }

  friend LabeledGraph build_graph(std::vector<std::string> sigma,
                                  std::vector<std::string> delta,
                                  std::vector<VertexSpec> vertices,
                                  std::vector<EdgeSpec> edges);

private:
  LabeledGraph() = default;

  std::vector<std::string> sigma_;
  std::vector<std::string> delta_;
  std::vector<std::string> vertex_ids_;
  std::vector<int> labels_;
  // adjacency per delta label, sorted ascending
  std::vector<std::vector<std::vector<int>>> out_;
  std::vector<std::vector<std::vector<int>>> in_;
  std::vector<std::vector<int>> sym_adj_;
};

/// Validates and assembles a graph.  Rejections name the offending id/label
/// verbatim: unknown vertex or label references, duplicate vertex ids,
/// duplicate (from,to,label) edges, empty alphabets.
LabeledGraph build_graph(std::vector<std::string> sigma,
                         std::vector<std::string> delta,
                         std::vector<VertexSpec> vertices,
                         std::vector<EdgeSpec> edges);

/// Endpoints of all walks from v whose edge labels spell `word` (indices into
/// delta()).  The empty word yields {v}.  When `symmetric` is set each step
/// may traverse an edge of the requested label in either direction.
VertexSet reach(const LabeledGraph& g, int v, std::span<const int> word,
                bool symmetric = false);

/// Same, with the word given as label strings; unknown labels are rejected.
VertexSet reach(const LabeledGraph& g, std::string_view vertex_id,
                std::span<const std::string> word, bool symmetric = false);

/// Connectivity of the symmetrized, label-forgetting graph.  The empty graph
/// counts as connected.
bool is_connected(const LabeledGraph& g);

}  // namespace gca
