#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gca/json.hpp"
#include "gca/multiset.hpp"

namespace gca {

/// A local rule: a map from (vertex label, capped pattern) to states.  Rules
/// are evaluators rather than tables, so the (huge) pattern domain is never
/// materialized.  States are fixed per rule; the alphabets may be pinned
/// (required_* non-empty, matched exactly against the graph) or left open
/// (empty = the rule reads labels generically and runs on any graph).
class LocalRule {
public:
  virtual ~LocalRule() = default;

  virtual const std::vector<std::string>& states() const = 0;
  virtual int radius() const = 0;
  virtual int cap() const = 0;
  virtual const std::vector<std::string>& required_sigma() const;
  /// Edge labels the rule reads, in the order word ids expect them.
  virtual const std::vector<std::string>& required_delta() const;
  /// True when patterns must be taken over symmetrized edges (out and in).
  virtual bool symmetric_neighborhood() const { return false; }

  /// New state for the center of pattern `p` at a vertex labeled `sigma`
  /// (index into the graph's Σ).  `p` must satisfy the center invariant and
  /// use this rule's radius, cap and letter order.
  virtual int apply(int sigma, const CappedMultiset& p) const = 0;

  /// Rules that interpret labels by name (domino constraints, translated
  /// formula checkers) return a copy bound to the graph's concrete Σ/Δ
  /// here; nullptr means the rule reads patterns positionally and needs no
  /// binding.
  virtual std::shared_ptr<const LocalRule> bind(
      const std::vector<std::string>& sigma,
      const std::vector<std::string>& delta) const;

  virtual Json to_json() const = 0;
  /// Stable content string hashed into transition-table cache keys.
  virtual std::string fingerprint_payload() const = 0;

  int state_index(const std::string& name) const;
};

using RulePtr = std::shared_ptr<const LocalRule>;

/// States 0..n-1 over any alphabet; every cell keeps its state.
RulePtr identity_rule(int num_states);

/// States {0..k-1}: a cell in state i moves to i+1 mod k if some
/// symmetrized neighbor is also in state i, and keeps i otherwise.  Fixed
/// points are exactly the proper k-colorings.
RulePtr coloring_rule(int k);

/// Five-state oscillator whose orbits reveal connectivity: states 0,1 blink
/// into each other while a_i collapses to 0 next to a blinker and cycles
/// a0->a1->a2->a0 otherwise.  Has no fixed points on any graph.
RulePtr connectivity_rule();

/// Conway's life via four torus directions n,e,ni,ei at radius 2: the eight
/// Moore neighbours are the endpoints of one- and two-letter words.
RulePtr life_cayley_rule();

/// Conway's life over a single symmetric label u at radius 1 (for Moore
/// graphs that already carry all eight adjacencies).
RulePtr life_plain_rule();

/// Explicit finite rule table.  Entries map exact (label, capped multiset)
/// pairs to states; anything absent falls back to the default state, which
/// keeps table rules total.
class TableRule final : public LocalRule {
public:
  struct Entry {
    int sigma;
    CappedMultiset pattern;
    int out;
  };

  TableRule(std::vector<std::string> states, std::vector<std::string> sigma,
            std::vector<std::string> delta, int radius, int cap,
            std::vector<Entry> entries, int default_state,
            bool symmetric = false);

  const std::vector<std::string>& states() const override { return states_; }
  int radius() const override { return radius_; }
  int cap() const override { return cap_; }
  const std::vector<std::string>& required_sigma() const override {
    return sigma_;
  }
  const std::vector<std::string>& required_delta() const override {
    return delta_;
  }
  bool symmetric_neighborhood() const override { return symmetric_; }
  int apply(int sigma, const CappedMultiset& p) const override;
  Json to_json() const override;
  std::string fingerprint_payload() const override;

  int default_state() const { return default_state_; }
  const std::vector<Entry>& entries() const { return entries_; }

private:
  std::vector<std::string> states_;
  std::vector<std::string> sigma_;
  std::vector<std::string> delta_;
  int radius_;
  int cap_;
  int default_state_;
  bool symmetric_;
  std::vector<Entry> entries_;         // sorted by (sigma, pattern entries)
};

/// Parses builtin descriptors {"kind":"builtin","name":...}, explicit
/// tables {"kind":"table",...}, and the domino-backed kinds ("domino",
/// "domino_seeded"); inverse of LocalRule::to_json.
RulePtr rule_from_json(const Json& j);

/// Named builtin lookup used by the CLI: "identity:N", "coloring:K",
/// "connectivity", "life_cayley", "life_plain".
RulePtr rule_from_name(const std::string& name);

}  // namespace gca
