#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gca/labeled_graph.hpp"

namespace gca {

enum class CorpusKind { Graphs, Formulas, Rules };

/// A named, deterministic instance list for harness sweeps.  Graph corpora
/// fill `graphs`; formula and rule corpora fill `items` (formula text and
/// builtin rule names, respectively).
struct Corpus {
  std::string name;
  CorpusKind kind = CorpusKind::Graphs;
  std::vector<LabeledGraph> graphs;
  std::vector<std::string> items;

  size_t size() const {
    return kind == CorpusKind::Graphs ? graphs.size() : items.size();
  }
};

/// Seed used by the sampled corpora when the caller does not pass one.
inline constexpr uint64_t kDefaultCorpusSeed = 20240917;

/// Resolves "builtin:<name>" against the registry below, or reads a JSON
/// corpus file: {"kind":"graphs","graphs":[...]} (a bare array of graph
/// objects also works) or {"kind":"formulas"|"rules","items":[...]}.
/// Unknown builtin names are rejected by name; `seed` only affects the
/// sample-* corpora.
Corpus load_corpus(const std::string& name_or_path,
                   uint64_t seed = kDefaultCorpusSeed);

struct CorpusInfo {
  std::string name;
  CorpusKind kind = CorpusKind::Graphs;
  std::string summary;
  size_t size = 0;
};

/// Registry behind `corpus list`, in listing order, with sizes resolved.
std::vector<CorpusInfo> builtin_corpora();

}  // namespace gca
