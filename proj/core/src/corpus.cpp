#include "gca/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "gca/error.hpp"
#include "gca/graph_gen.hpp"
#include "gca/json.hpp"

namespace gca {

namespace {

std::vector<LabeledGraph> all_graphs(int max_vertices) {
  return enumerate_graphs(max_vertices, 1, 1);
}

std::vector<LabeledGraph> filtered(int max_vertices, bool want_connected) {
  std::vector<LabeledGraph> out;
  enumerate_graphs(max_vertices, 1, 1, [&](const LabeledGraph& g) {
    if (is_connected(g) == want_connected) out.push_back(g);
  });
  return out;
}

std::vector<LabeledGraph> symmetric_graphs(int max_vertices) {
  std::vector<LabeledGraph> out;
  enumerate_symmetric_graphs(max_vertices,
                             [&](const LabeledGraph& g) { out.push_back(g); });
  return out;
}

std::vector<LabeledGraph> tori() {
  return {torus_graph(3, 3), torus_graph(4, 4), torus_graph(5, 5)};
}

std::vector<LabeledGraph> moore_tori() {
  return {moore_torus_graph(3, 3), moore_torus_graph(4, 4),
          moore_torus_graph(5, 5)};
}

std::vector<LabeledGraph> cycles() {
  return {cycle_graph(3), cycle_graph(4), cycle_graph(5), cycle_graph(6)};
}

// K graphs out of the <=4-vertex enumeration, chosen by a partial
// Fisher-Yates over indices.  mt19937_64 output is pinned by the standard,
// and the draw avoids std::uniform_int_distribution, so a (name, seed) pair
// names the same list on every platform.
std::vector<LabeledGraph> sample_le4(size_t k, uint64_t seed) {
  auto pool = all_graphs(4);
  std::mt19937_64 rng(seed);
  k = std::min(k, pool.size());
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + static_cast<size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.erase(pool.begin() + static_cast<ptrdiff_t>(k), pool.end());
  return pool;
}

// Orbit formulas lifted verbatim from the domino reductions: fixed-point
// existence, the seeded two-preimage form, and its recurring variant (the
// ~inf atom is constant true on finite graphs, making the third formula
// constantly false; it is kept as written).
const std::vector<std::string> kDominoFormulas = {
    "exists x. x -> x",
    "exists x. exists y. (x -> x & y -> x & !(x = y))",
    "exists x. exists y. (x -> x & y -> x & !(x ~inf y))",
};

// Equality/step-only formulas with at most two variables, so their set
// translations stay cheap to model-check on three-vertex graphs.
const std::vector<std::string> kFoFormulas = {
    "exists x. x -> x",
    "exists x. exists y. (x -> y & !(x = y))",
    "forall x. exists y. y -> x",
    "forall x. forall y. ((x -> y & y -> x) => x = y)",
    "exists x. forall y. (y -> x => y = x)",
    "forall x. exists y. x -> y",
};

// One formula per counting construct plus mixed forms; all expandable
// (no npre modulus).
const std::vector<std::string> kCountingFormulas = {
    "exists x. npre(x) = 2",
    "exists x. npre(x) >= 1",
    "exists x. exists y. x ->{2}!= y",
    "exists x. #siblings(x) = 1",
    "forall x. (npre(x) > 0 => npre(x) = 1)",
    "exists x. (x -> x & npre(x) = 1)",
};

// Two-variable sentences covering both quantifier orders and both sorts;
// sized for the connected translation on three-vertex graphs.
const std::vector<std::string> kMsoTwoVar = {
    "exists X. forall x. x in X",
    "forall x. exists y. edge[u](x,y)",
    "exists x. forall y. (edge[u](y,x) | y = x)",
    "forall X. exists x. (x in X | edge[u](x,x))",
    "exists X. exists x. (x in X & edge[u](x,x))",
};

// Mixed-sort sentences (up to three variables) for the general translation
// on graphs with at most two vertices, connected or not.
const std::vector<std::string> kMsoMixed = {
    "exists x. x = x",
    "forall x. exists y. edge[u](x,y)",
    "exists X. forall x. x in X",
    "exists X. exists x. exists y. (x in X & !(y in X))",
    "forall X. forall x. forall y. ((x in X & edge[u](x,y)) => y in X)",
    "exists X. exists x. (x in X & edge[u](x,x))",
};

const std::vector<std::string> kRules = {
    "identity:2",
    "coloring:2",
    "life_plain",
};

Corpus from_json_doc(const std::string& name, const Json& j) {
  Corpus c;
  c.name = name;
  const Json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object()) {
    std::string kind = j.value("kind", "graphs");
    if (kind == "graphs") {
      if (!j.contains("graphs"))
        throw ValidationError("corpus file " + name + " lacks \"graphs\"");
      list = &j.at("graphs");
    } else if (kind == "formulas" || kind == "rules") {
      c.kind = kind == "formulas" ? CorpusKind::Formulas : CorpusKind::Rules;
      for (const auto& item : j.at("items"))
        c.items.push_back(item.get<std::string>());
      return c;
    } else {
      throw ValidationError("corpus file " + name + " has unknown kind \"" +
                            kind + "\"");
    }
  } else {
    throw ValidationError("corpus file " + name +
                          " must hold an object or an array");
  }
  for (const auto& g : *list) c.graphs.push_back(LabeledGraph::from_json(g));
  return c;
}

}  // namespace

Corpus load_corpus(const std::string& name_or_path, uint64_t seed) {
  const std::string prefix = "builtin:";
  if (name_or_path.rfind(prefix, 0) != 0) {
    std::ifstream in(name_or_path);
    if (!in) throw IoError("cannot read corpus file " + name_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_doc(name_or_path, Json::parse(buf.str()));
  }

  std::string name = name_or_path.substr(prefix.size());
  Corpus c;
  c.name = name_or_path;
  auto graphs = [&](std::vector<LabeledGraph> gs) {
    c.graphs = std::move(gs);
    return c;
  };
  auto texts = [&](CorpusKind kind, const std::vector<std::string>& items) {
    c.kind = kind;
    c.items = items;
    return c;
  };

  if (name == "all-le-1") return graphs(all_graphs(1));
  if (name == "all-le-2") return graphs(all_graphs(2));
  if (name == "all-le-3") return graphs(all_graphs(3));
  if (name == "all-le-4") return graphs(all_graphs(4));
  if (name == "connected-le-2") return graphs(filtered(2, true));
  if (name == "connected-le-3") return graphs(filtered(3, true));
  if (name == "disconnected-le-2") return graphs(filtered(2, false));
  if (name == "sym-le-4") return graphs(symmetric_graphs(4));
  if (name == "sym-le-5") return graphs(symmetric_graphs(5));
  if (name == "tori") return graphs(tori());
  if (name == "moore-tori") return graphs(moore_tori());
  if (name == "cycles") return graphs(cycles());
  if (name.rfind("sample-le-4:", 0) == 0) {
    std::string arg = name.substr(std::string("sample-le-4:").size());
    size_t pos = 0;
    unsigned long k = 0;
    try {
      k = std::stoul(arg, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != arg.size() || k == 0)
      throw ValidationError("sample-le-4 needs a positive count, got \"" +
                            arg + "\"");
    return graphs(sample_le4(k, seed));
  }
  if (name == "domino-formulas")
    return texts(CorpusKind::Formulas, kDominoFormulas);
  if (name == "fo-formulas") return texts(CorpusKind::Formulas, kFoFormulas);
  if (name == "counting-formulas")
    return texts(CorpusKind::Formulas, kCountingFormulas);
  if (name == "mso-two-var") return texts(CorpusKind::Formulas, kMsoTwoVar);
  if (name == "mso-mixed") return texts(CorpusKind::Formulas, kMsoMixed);
  if (name == "rules") return texts(CorpusKind::Rules, kRules);

  throw ValidationError("unknown corpus name \"" + name_or_path + "\"");
}

std::vector<CorpusInfo> builtin_corpora() {
  auto count = [](const std::string& name) {
    return load_corpus(name).size();
  };
  // n-vertex counts without materializing: 2^(n^2) digraphs (every ordered
  // pair incl. loops), 2^(n(n+1)/2) symmetric graphs.
  auto all_count = [](int max) {
    size_t total = 0;
    for (int n = 1; n <= max; ++n) total += size_t{1} << (n * n);
    return total;
  };
  auto sym_count = [](int max) {
    size_t total = 0;
    for (int n = 1; n <= max; ++n) total += size_t{1} << (n * (n + 1) / 2);
    return total;
  };
  std::vector<CorpusInfo> out;
  auto add = [&](const std::string& name, CorpusKind kind,
                 const std::string& summary, size_t size) {
    out.push_back({name, kind, summary, size});
  };
  for (int n = 1; n <= 4; ++n)
    add("builtin:all-le-" + std::to_string(n), CorpusKind::Graphs,
        "every labeled digraph on <=" + std::to_string(n) +
            " vertices (single labels)",
        all_count(n));
  add("builtin:connected-le-2", CorpusKind::Graphs,
      "connected members of all-le-2", count("builtin:connected-le-2"));
  add("builtin:connected-le-3", CorpusKind::Graphs,
      "connected members of all-le-3", count("builtin:connected-le-3"));
  add("builtin:disconnected-le-2", CorpusKind::Graphs,
      "disconnected members of all-le-2", count("builtin:disconnected-le-2"));
  add("builtin:sym-le-4", CorpusKind::Graphs,
      "every symmetric graph on <=4 vertices (loops allowed)", sym_count(4));
  add("builtin:sym-le-5", CorpusKind::Graphs,
      "every symmetric graph on <=5 vertices (loops allowed)", sym_count(5));
  add("builtin:tori", CorpusKind::Graphs, "Cayley tori Z3xZ3, Z4xZ4, Z5xZ5",
      3);
  add("builtin:moore-tori", CorpusKind::Graphs,
      "3x3, 4x4, 5x5 tori with plain Moore adjacency", 3);
  add("builtin:cycles", CorpusKind::Graphs, "cycles Z3..Z6", 4);
  add("builtin:sample-le-4:K", CorpusKind::Graphs,
      "K graphs drawn from all-le-4 (seeded; see --seed)", 0);
  add("builtin:domino-formulas", CorpusKind::Formulas,
      "the domino-reduction orbit formulas", kDominoFormulas.size());
  add("builtin:fo-formulas", CorpusKind::Formulas,
      "two-variable =/-> formulas for translation sweeps",
      kFoFormulas.size());
  add("builtin:counting-formulas", CorpusKind::Formulas,
      "npre / chain / sibling formulas with finite expansions",
      kCountingFormulas.size());
  add("builtin:mso-two-var", CorpusKind::Formulas,
      "two-variable graph sentences, both orders and sorts",
      kMsoTwoVar.size());
  add("builtin:mso-mixed", CorpusKind::Formulas,
      "mixed-sort graph sentences for the general translation",
      kMsoMixed.size());
  add("builtin:rules", CorpusKind::Rules,
      "rules paired with fo-formulas in translation sweeps", kRules.size());
  return out;
}

}  // namespace gca
