#include "gca/labeled_graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gca/error.hpp"

namespace gca {

VertexSet::VertexSet(int universe) : n_(universe), bits_((universe + 63) / 64, 0) {
  if (universe < 0) throw ValidationError("vertex set universe must be non-negative");
}

void VertexSet::check(int v) const {
  if (v < 0 || v >= n_)
    throw ValidationError("vertex index " + std::to_string(v) +
                          " out of range for universe of size " + std::to_string(n_));
}

bool VertexSet::test(int v) const {
  check(v);
  return (bits_[v / 64] >> (v % 64)) & 1u;
}

void VertexSet::set(int v, bool value) {
  check(v);
  uint64_t bit = uint64_t{1} << (v % 64);
  if (value)
    bits_[v / 64] |= bit;
  else
    bits_[v / 64] &= ~bit;
}

int VertexSet::count() const {
  int c = 0;
  for (uint64_t w : bits_) c += std::popcount(w);
  return c;
}

std::vector<int> VertexSet::elements() const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v)
    if ((bits_[v / 64] >> (v % 64)) & 1u) out.push_back(v);
  return out;
}

uint64_t VertexSet::mask64() const {
  if (n_ > 64)
    throw ValidationError("vertex set with universe " + std::to_string(n_) +
                          " does not fit a 64-bit mask");
  return bits_.empty() ? 0 : bits_[0];
}

VertexSet VertexSet::from_mask(int universe, uint64_t mask) {
  VertexSet s(universe);
  for (int v = 0; v < universe; ++v)
    if ((mask >> v) & 1u) s.set(v);
  return s;
}

bool LabeledGraph::has_edge(int delta_idx, int from, int to) const {
  const auto& nbrs = out_[delta_idx][from];
  return std::binary_search(nbrs.begin(), nbrs.end(), to);
}

int LabeledGraph::edge_count() const {
  int c = 0;
  for (const auto& per_label : out_)
    for (const auto& nbrs : per_label) c += static_cast<int>(nbrs.size());
  return c;
}

namespace {

int index_of(const std::vector<std::string>& xs, std::string_view x) {
  for (size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == x) return static_cast<int>(i);
  return -1;
}

}  // namespace

int LabeledGraph::vertex_index(std::string_view id) const { return index_of(vertex_ids_, id); }
int LabeledGraph::sigma_index(std::string_view label) const { return index_of(sigma_, label); }
int LabeledGraph::delta_index(std::string_view label) const { return index_of(delta_, label); }

LabeledGraph build_graph(std::vector<std::string> sigma,
                         std::vector<std::string> delta,
                         std::vector<VertexSpec> vertices,
                         std::vector<EdgeSpec> edges) {
  if (sigma.empty()) throw ValidationError("sigma alphabet must not be empty");
  if (delta.empty()) throw ValidationError("delta alphabet must not be empty");
  auto check_distinct = [](const std::vector<std::string>& xs, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& x : xs)
      if (!seen.insert(x).second)
        throw ValidationError(std::string("duplicate ") + what + " \"" + x + "\"");
  };
  check_distinct(sigma, "sigma label");
  check_distinct(delta, "delta label");

  LabeledGraph g;
  g.sigma_ = std::move(sigma);
  g.delta_ = std::move(delta);

  std::unordered_map<std::string, int> vid;
  for (const auto& v : vertices) {
    if (!vid.emplace(v.id, static_cast<int>(g.vertex_ids_.size())).second)
      throw ValidationError("duplicate vertex id \"" + v.id + "\"");
    int lab = index_of(g.sigma_, v.label);
    if (lab < 0)
      throw ValidationError("vertex \"" + v.id + "\" has unknown label \"" + v.label + "\"");
    g.vertex_ids_.push_back(v.id);
    g.labels_.push_back(lab);
  }

  int n = g.vertex_count();
  int nd = g.delta_count();
  g.out_.assign(nd, std::vector<std::vector<int>>(n));
  g.in_.assign(nd, std::vector<std::vector<int>>(n));
  g.sym_adj_.assign(n, {});

  std::unordered_set<uint64_t> seen_edges;
  for (const auto& e : edges) {
    auto from_it = vid.find(e.from);
    if (from_it == vid.end())
      throw ValidationError("edge references unknown vertex \"" + e.from + "\"");
    auto to_it = vid.find(e.to);
    if (to_it == vid.end())
      throw ValidationError("edge references unknown vertex \"" + e.to + "\"");
    int lab = index_of(g.delta_, e.label);
    if (lab < 0)
      throw ValidationError("edge (" + e.from + " -> " + e.to +
                            ") has unknown label \"" + e.label + "\"");
    uint64_t key = (uint64_t(lab) * n + from_it->second) * n + to_it->second;
    if (!seen_edges.insert(key).second)
      throw ValidationError("duplicate edge (" + e.from + " -> " + e.to +
                            ", label \"" + e.label + "\")");
    g.out_[lab][from_it->second].push_back(to_it->second);
    g.in_[lab][to_it->second].push_back(from_it->second);
  }
  for (int d = 0; d < nd; ++d)
    for (int v = 0; v < n; ++v) {
      std::sort(g.out_[d][v].begin(), g.out_[d][v].end());
      std::sort(g.in_[d][v].begin(), g.in_[d][v].end());
    }
  for (int v = 0; v < n; ++v) {
    std::vector<int>& adj = g.sym_adj_[v];
    for (int d = 0; d < nd; ++d) {
      adj.insert(adj.end(), g.out_[d][v].begin(), g.out_[d][v].end());
      adj.insert(adj.end(), g.in_[d][v].begin(), g.in_[d][v].end());
    }
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

VertexSet reach(const LabeledGraph& g, int v, std::span<const int> word, bool symmetric) {
  if (v < 0 || v >= g.vertex_count())
    throw ValidationError("reach: vertex index " + std::to_string(v) + " out of range");
  for (int letter : word)
    if (letter < 0 || letter >= g.delta_count())
      throw ValidationError("reach: delta index " + std::to_string(letter) + " out of range");

  std::vector<char> cur(g.vertex_count(), 0), next;
  cur[v] = 1;
  for (int letter : word) {
    next.assign(g.vertex_count(), 0);
    for (int u = 0; u < g.vertex_count(); ++u) {
      if (!cur[u]) continue;
      for (int w : g.out(letter, u)) next[w] = 1;
      if (symmetric)
        for (int w : g.in(letter, u)) next[w] = 1;
    }
    cur.swap(next);
  }
  VertexSet result(g.vertex_count());
  for (int u = 0; u < g.vertex_count(); ++u)
    if (cur[u]) result.set(u);
  return result;
}

VertexSet reach(const LabeledGraph& g, std::string_view vertex_id,
                std::span<const std::string> word, bool symmetric) {
  int v = g.vertex_index(vertex_id);
  if (v < 0)
    throw ValidationError("reach: unknown vertex \"" + std::string(vertex_id) + "\"");
  std::vector<int> letters;
  letters.reserve(word.size());
  for (const auto& lab : word) {
    int d = g.delta_index(lab);
    if (d < 0) throw ValidationError("reach: unknown edge label \"" + lab + "\"");
    letters.push_back(d);
  }
  return reach(g, v, letters, symmetric);
}

bool is_connected(const LabeledGraph& g) {
  int n = g.vertex_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int visited = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : g.sym_neighbors(v))
      if (!seen[u]) {
        seen[u] = 1;
        ++visited;
        queue.push_back(u);
      }
  }
  return visited == n;
}

Json LabeledGraph::to_json() const {
  Json j;
  j["sigma"] = sigma_;
  j["delta"] = delta_;
  Json verts = Json::array();
  for (int v = 0; v < vertex_count(); ++v)
    verts.push_back(Json{{"id", vertex_ids_[v]}, {"label", sigma_[labels_[v]]}});
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (int d = 0; d < delta_count(); ++d)
    for (int v = 0; v < vertex_count(); ++v)
      for (int w : out_[d][v])
        edges.push_back(Json{{"from", vertex_ids_[v]},
                             {"to", vertex_ids_[w]},
                             {"label", delta_[d]}});
  j["edges"] = std::move(edges);
  return j;
}

LabeledGraph LabeledGraph::from_json(const Json& j) {
  try {
    std::vector<std::string> sigma = j.at("sigma").get<std::vector<std::string>>();
    std::vector<std::string> delta = j.at("delta").get<std::vector<std::string>>();
    std::vector<VertexSpec> vertices;
    for (const auto& v : j.at("vertices"))
      vertices.push_back({v.at("id").get<std::string>(), v.at("label").get<std::string>()});
    std::vector<EdgeSpec> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                       e.at("label").get<std::string>()});
    return build_graph(std::move(sigma), std::move(delta), std::move(vertices),
                       std::move(edges));
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed graph JSON: ") + e.what());
  }
}

std::string LabeledGraph::canonical_string() const {
  return to_json().dump();
}

}  // namespace gca
