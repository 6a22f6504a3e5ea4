#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gca/json.hpp"
#include "gca/labeled_graph.hpp"
#include "gca/local_rule.hpp"

namespace gca {

/// Per-edge-label allowed state pairs.  Labels absent from `pairs` are
/// unconstrained (all of S×S); an explicitly empty list forbids every pair.
/// Pairs are ordered: an edge (v,v') labeled δ demands (c_v, c_{v'}) ∈ D_δ.
struct DominoSpec {
  std::vector<std::string> states;
  std::map<std::string, std::vector<std::pair<int, int>>> pairs;
  std::optional<int> s0;

  int state_index(const std::string& name) const;
  bool pair_allowed(const std::string& label, int a, int b) const;

  static DominoSpec from_json(const Json& j);
  Json to_json() const;
};

/// True iff every labeled edge of g satisfies its pair set.  `states` holds
/// indices into d.states, one per vertex.
bool is_valid(const LabeledGraph& g, const DominoSpec& d,
              std::span<const int> states);

/// Backtracking search with forward checking.  When require_s0 is set, only
/// configurations containing d.s0 count (d.s0 must then be present).
std::optional<std::vector<int>> solve_domino(const LabeledGraph& g,
                                             const DominoSpec& d,
                                             bool require_s0 = false);

/// Radius-1 cap-1 rule whose fixed points are exactly the D-valid
/// configurations: a vertex keeps its state while every outgoing constraint
/// holds and otherwise moves to the cyclic successor state (a one-state
/// spec gains a fresh sink state so the rule never stalls on a violation).
RulePtr domino_to_rule(const DominoSpec& d);

/// Seeded variant over S∪{t,e0,e1}: t plays the role of s0 and
/// collapses back to it, constraint violations raise oscillating error
/// states.  Fixed points are D-valid configurations over S, and a fixed
/// point has a second preimage exactly when it contains s0.
RulePtr seeded_rule(const DominoSpec& d, const std::string& s0);

/// Higher-block recoding of a rule on the torus with the given sides
/// (1 side = cycle with labels g,gi; 2 sides = torus with n,e,ni,ei; more =
/// g0,g0i,...).  States of the result are the locally-fixed ball patterns;
/// valid configurations correspond 1:1 to fixed points of the rule.
/// Rejects sides ≤ 2·radius (the ball would wrap onto itself).
DominoSpec rule_to_domino(const RulePtr& f, std::span<const int> sides);

/// Pair recoding for the seeded equivalence: states are (fixed point,
/// preimage) ball patterns, `markers` lists the states whose two center
/// components differ.  The rule satisfies ∃x∃y(x→x ∧ y→x ∧ x≠y) on the
/// torus iff (spec, s0) is seeded-solvable for some marker s0.
struct SeededRecoding {
  DominoSpec spec;
  std::vector<std::string> markers;
};
SeededRecoding rule_to_seeded_domino(const RulePtr& f,
                                     std::span<const int> sides);

/// Builds the torus rule_to_domino runs on (shared with tests/CLI).
LabeledGraph domino_torus(std::span<const int> sides);

/// Deserializer for the rule kinds "domino" and "domino_seeded".
RulePtr domino_rule_from_json(const Json& j);

}  // namespace gca
