#include "gca/graph_gen.hpp"

#include <string>

#include "gca/error.hpp"

namespace gca {

int GroupTable::check() const {
  int n = order();
  if (n == 0) throw ValidationError("group table is empty");
  if (static_cast<int>(mul.size()) != n)
    throw ValidationError("group table has wrong number of rows");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(mul[a].size()) != n)
      throw ValidationError("group table row \"" + element_names[a] + "\" has wrong length");
    for (int b = 0; b < n; ++b)
      if (mul[a][b] < 0 || mul[a][b] >= n)
        throw ValidationError("group axiom violated: table is not closed at (" +
                              element_names[a] + ", " + element_names[b] + ")");
  }
  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = mul[e][a] == a && mul[a][e] == a;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) throw ValidationError("group axiom violated: no identity element");
  for (int a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < n && !has_inverse; ++b)
      has_inverse = mul[a][b] == identity && mul[b][a] == identity;
    if (!has_inverse)
      throw ValidationError("group axiom violated: element \"" + element_names[a] +
                            "\" has no inverse");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
          throw ValidationError("group axiom violated: associativity fails at (" +
                                element_names[a] + ", " + element_names[b] + ", " +
                                element_names[c] + ")");
  return identity;
}

GroupTable GroupTable::cyclic_product(const std::vector<int>& dims) {
  if (dims.empty()) throw ValidationError("cyclic product needs at least one factor");
  int n = 1;
  for (int d : dims) {
    if (d <= 0) throw ValidationError("cyclic factor sizes must be positive");
    n *= d;
  }
  auto decode = [&](int idx) {
    std::vector<int> coords(dims.size());
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      coords[i] = idx % dims[i];
      idx /= dims[i];
    }
    return coords;
  };
  auto encode = [&](const std::vector<int>& coords) {
    int idx = 0;
    for (size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + coords[i];
    return idx;
  };
  GroupTable t;
  t.element_names.resize(n);
  for (int i = 0; i < n; ++i) {
    auto c = decode(i);
    std::string name;
    for (size_t k = 0; k < c.size(); ++k) {
      if (k) name += ',';
      name += std::to_string(c[k]);
    }
    t.element_names[i] = name;
  }
  t.mul.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto ca = decode(a), cb = decode(b);
      std::vector<int> cc(dims.size());
      for (size_t i = 0; i < dims.size(); ++i) cc[i] = (ca[i] + cb[i]) % dims[i];
      t.mul[a][b] = encode(cc);
    }
  return t;
}

LabeledGraph cayley_graph(const GroupTable& table, const std::vector<Generator>& generators,
                          const std::string& sigma_label) {
  table.check();
  if (generators.empty()) throw ValidationError("Cayley graph needs at least one generator");
  std::vector<std::string> delta;
  std::vector<int> gen_elements;
  for (const auto& g : generators) {
    delta.push_back(g.label);
    int e = -1;
    for (int i = 0; i < table.order(); ++i)
      if (table.element_names[i] == g.element) {
        e = i;
        break;
      }
    if (e < 0)
      throw ValidationError("generator \"" + g.label + "\" names unknown element \"" +
                            g.element + "\"");
    gen_elements.push_back(e);
  }
  std::vector<VertexSpec> vertices;
  for (const auto& name : table.element_names) vertices.push_back({name, sigma_label});
  std::vector<EdgeSpec> edges;
  for (int a = 0; a < table.order(); ++a)
    for (size_t gi = 0; gi < generators.size(); ++gi)
      edges.push_back({table.element_names[a],
                       table.element_names[table.mul[a][gen_elements[gi]]],
                       generators[gi].label});
  return build_graph({sigma_label}, std::move(delta), std::move(vertices), std::move(edges));
}

LabeledGraph torus_graph(int w, int h) {
  if (w <= 0 || h <= 0) throw ValidationError("torus sides must be positive");
  GroupTable t = GroupTable::cyclic_product({w, h});
  auto name = [&](int x, int y) { return std::to_string(x) + "," + std::to_string(y); };
  return cayley_graph(t, {{"n", name(0, 1 % h)},
                          {"e", name(1 % w, 0)},
                          {"ni", name(0, (h - 1) % h)},
                          {"ei", name((w - 1) % w, 0)}});
}

LabeledGraph cycle_graph(int n) {
  if (n <= 0) throw ValidationError("cycle length must be positive");
  GroupTable t = GroupTable::cyclic_product({n});
  return cayley_graph(t, {{"g", std::to_string(1 % n)},
                          {"gi", std::to_string((n - 1) % n)}});
}

LabeledGraph torus_graph_nd(const std::vector<int>& sides) {
  GroupTable t = GroupTable::cyclic_product(sides);
  std::vector<Generator> gens;
  for (size_t k = 0; k < sides.size(); ++k) {
    std::vector<int> fwd(sides.size(), 0), bwd(sides.size(), 0);
    fwd[k] = 1 % sides[k];
    bwd[k] = (sides[k] - 1) % sides[k];
    auto name = [&](const std::vector<int>& c) {
      std::string s;
      for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
      }
      return s;
    };
    gens.push_back({"g" + std::to_string(k), name(fwd)});
    gens.push_back({"g" + std::to_string(k) + "i", name(bwd)});
  }
  return cayley_graph(t, gens);
}

LabeledGraph moore_torus_graph(int w, int h) {
  if (w <= 0 || h <= 0) throw ValidationError("torus sides must be positive");
  auto name = [&](int x, int y) {
    return std::to_string(((x % w) + w) % w) + "," + std::to_string(((y % h) + h) % h);
  };
  std::vector<VertexSpec> vertices;
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) vertices.push_back({name(x, y), "o"});
  // Vertex order must match torus_graph (cyclic_product order: x major).
  std::vector<EdgeSpec> edges;
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) {
      std::vector<std::string> seen;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          if (dx == 0 && dy == 0) continue;
          std::string to = name(x + dx, y + dy);
          if (to == name(x, y)) continue;  // wrapped onto itself
          bool dup = false;
          for (const auto& s : seen) dup = dup || s == to;
          if (dup) continue;
          seen.push_back(to);
          edges.push_back({name(x, y), to, "u"});
        }
    }
  return build_graph({"o"}, {"u"}, std::move(vertices), std::move(edges));
}

LabeledGraph complete_graph(int n) {
  if (n <= 0) throw ValidationError("complete graph needs at least one vertex");
  std::vector<VertexSpec> vertices;
  for (int i = 0; i < n; ++i) vertices.push_back({"v" + std::to_string(i), "o"});
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        edges.push_back({"v" + std::to_string(i), "v" + std::to_string(j), "u"});
  return build_graph({"o"}, {"u"}, std::move(vertices), std::move(edges));
}

std::vector<std::string> auto_sigma(int size) {
  if (size <= 0) throw ValidationError("sigma size must be positive");
  if (size == 1) return {"o"};
  std::vector<std::string> out;
  for (int i = 0; i < size; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

std::vector<std::string> auto_delta(int size) {
  if (size <= 0) throw ValidationError("delta size must be positive");
  if (size == 1) return {"u"};
  std::vector<std::string> out;
  for (int i = 0; i < size; ++i) out.push_back("d" + std::to_string(i));
  return out;
}

void enumerate_graphs(int max_vertices, int sigma_size, int delta_size,
                      const std::function<void(const LabeledGraph&)>& yield, int bound) {
  if (max_vertices < 0) throw ValidationError("max_vertices must be non-negative");
  if (max_vertices > bound)
    throw BudgetError("graph enumeration up to " + std::to_string(max_vertices) +
                      " vertices exceeds the bound of " + std::to_string(bound));
  auto sigma = auto_sigma(sigma_size);
  auto delta = auto_delta(delta_size);
  if (max_vertices == 0) {
    yield(build_graph(sigma, delta, {}, {}));
    return;
  }
  for (int n = 1; n <= max_vertices; ++n) {
    int edge_bits = delta_size * n * n;
    if (edge_bits > 62)
      throw BudgetError("edge subsets for " + std::to_string(n) +
                        " vertices need " + std::to_string(edge_bits) + " bits");
    std::vector<std::string> names;
    for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
    std::vector<int> labeling(n, 0);
    while (true) {
      std::vector<VertexSpec> vertices;
      for (int v = 0; v < n; ++v) vertices.push_back({names[v], sigma[labeling[v]]});
      for (uint64_t mask = 0; mask < (uint64_t{1} << edge_bits); ++mask) {
        std::vector<EdgeSpec> edges;
        int bit = 0;
        for (int d = 0; d < delta_size; ++d)
          for (int from = 0; from < n; ++from)
            for (int to = 0; to < n; ++to, ++bit)
              if ((mask >> bit) & 1u) edges.push_back({names[from], names[to], delta[d]});
        yield(build_graph(sigma, delta, vertices, edges));
      }
      // next labeling, least-significant digit last
      int pos = n - 1;
      while (pos >= 0 && ++labeling[pos] == sigma_size) labeling[pos--] = 0;
      if (pos < 0) break;
    }
  }
}

std::vector<LabeledGraph> enumerate_graphs(int max_vertices, int sigma_size, int delta_size,
                                           int bound) {
  std::vector<LabeledGraph> out;
  enumerate_graphs(max_vertices, sigma_size, delta_size,
                   [&](const LabeledGraph& g) { out.push_back(g); }, bound);
  return out;
}

void enumerate_symmetric_graphs(int max_vertices,
                                const std::function<void(const LabeledGraph&)>& yield,
                                int bound) {
  if (max_vertices < 0) throw ValidationError("max_vertices must be non-negative");
  if (max_vertices > bound)
    throw BudgetError("symmetric graph enumeration up to " + std::to_string(max_vertices) +
                      " vertices exceeds the bound of " + std::to_string(bound));
  if (max_vertices == 0) {
    yield(build_graph({"o"}, {"u"}, {}, {}));
    return;
  }
  for (int n = 1; n <= max_vertices; ++n) {
    std::vector<std::string> names;
    for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
    std::vector<VertexSpec> vertices;
    for (int v = 0; v < n; ++v) vertices.push_back({names[v], "o"});
    std::vector<std::pair<int, int>> pairs;  // i <= j, loops included
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) pairs.push_back({i, j});
    for (uint64_t mask = 0; mask < (uint64_t{1} << pairs.size()); ++mask) {
      std::vector<EdgeSpec> edges;
      for (size_t b = 0; b < pairs.size(); ++b) {
        if (!((mask >> b) & 1u)) continue;
        auto [i, j] = pairs[b];
        edges.push_back({names[i], names[j], "u"});
        if (i != j) edges.push_back({names[j], names[i], "u"});
      }
      yield(build_graph({"o"}, {"u"}, vertices, edges));
    }
  }
}

}  // namespace gca
