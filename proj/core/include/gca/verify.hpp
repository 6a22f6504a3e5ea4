#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/json.hpp"
#include "gca/labeled_graph.hpp"
#include "gca/local_rule.hpp"
#include "gca/mso.hpp"
#include "gca/translate.hpp"

namespace gca {

struct VerifyOptions {
  bool connected_variant = false;  // route mso sentences through
                                   // mso_to_foca_connected
  uint64_t state_budget = kDefaultStateBudget;
  uint64_t config_budget = TransitionTable::kDefaultBudget;
  uint64_t multiset_budget = kDefaultMultisetBudget;
  int jobs = 1;             // corpus-level parallelism
  bool timings = true;      // emit wall-clock fields in the JSON report
  bool lemma_probes = true; // decode good_i / truth certificates (mso side)
  std::string cache_dir;
};

/// Outcome on one corpus graph.
struct InstanceResult {
  int index = 0;
  int vertices = 0;
  int edges = 0;
  bool connected = false;
  bool direct = false;      // brute-force check of the source formula
  bool translated = false;  // check through the translation
  bool agree = false;
  uint64_t configs = 0;     // |S|^|V| on the orbit side
  uint64_t good_checked = 0;
  uint64_t good_violations = 0;
  uint64_t truth_checked = 0;
  uint64_t truth_violations = 0;
  double millis = 0.0;
};

/// Corpus-wide equivalence report.  Disagreements and probe violations do
/// not raise; they land in `witnesses` with the full evidence (graph,
/// formulas, offending configurations) so a harness can exit nonzero and
/// still print everything it saw.
struct TranslationReport {
  std::string direction;   // "mso-to-foca" or "foca-to-mso"
  std::string variant;     // "general" / "connected"; empty for foca-to-mso
  std::string formula;     // source formula text
  std::string translated;  // companion FO formula / image MSO formula
  Json rule;               // foca-to-mso: the rule under test
  uint64_t states = 0;     // orbit-side alphabet size
  int agreed = 0;
  int disagreed = 0;
  uint64_t probe_violations = 0;
  std::vector<InstanceResult> instances;
  std::vector<Json> witnesses;

  Json to_json(bool timings = true) const;
};

/// mso_check(G, psi) versus fo_check of the companion formula over the
/// translated rule's transition table, for every corpus graph.  With probes
/// on, every configuration satisfying the existential closure of good_i is
/// decoded and must sit in S_{λ(i)} at each vertex with one chosen vertex
/// per first-order component, and truth(c) must match direct matrix
/// satisfaction under the decoded assignment.  Workers own their tables and
/// results merge by graph index, so reports are deterministic for any job
/// count.
TranslationReport verify_mso(const MsoFormula& psi,
                             const std::vector<LabeledGraph>& corpus,
                             const VerifyOptions& opt = {});

/// fo_check(phi, f, G) versus mso_check(G, foca_to_mso(phi, f)) over the
/// corpus.  The image formula is built once per distinct graph alphabet.
TranslationReport verify_fo(const FoFormula& phi, const RulePtr& f,
                            const std::vector<LabeledGraph>& corpus,
                            const VerifyOptions& opt = {});

/// Sweeps sentences against the disconnected members of `graphs`, looking
/// for a pair where the connected-variant companion gets the answer wrong
/// while the general one gets it right.  Returns the first hit in
/// (sentence, graph) order, or found=false when the corpus has none.
struct CounterexampleProbe {
  bool found = false;
  std::string sentence;
  int graph_index = -1;
  Json witness;
};
CounterexampleProbe find_connectivity_counterexample(
    const std::vector<std::string>& sentences,
    const std::vector<LabeledGraph>& graphs, const VerifyOptions& opt = {});

}  // namespace gca
