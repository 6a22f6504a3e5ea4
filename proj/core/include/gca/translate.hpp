#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gca/fo.hpp"
#include "gca/formula.hpp"
#include "gca/local_rule.hpp"
#include "gca/mso.hpp"

namespace gca {

/// Ψ_→ conjoins over every capped multiset a rule can see, so the domain
/// Σ×MSᵏ(Δ^{≤r}×S) must stay enumerable.
inline constexpr uint64_t kDefaultMultisetBudget = 1000000;

/// Upper bound on the layered alphabet built for an MSO sentence.
inline constexpr uint64_t kDefaultStateBudget = uint64_t{1} << 16;

/// Turns "orbits of f satisfy φ" into an MSO property of the graph itself:
/// each configuration variable becomes |S| set variables (a vertex's state
/// is its membership count minus one), = and -> atoms become Ψ_= / Ψ_→, and
/// every quantifier carries a representation guard restricting tuples to
/// ones where each vertex lies in at least one set.  φ must use only = and
/// -> (expand counting atoms first; ~inf is rejected).  `sigma`/`delta`
/// default to the rule's pinned alphabets and must be given for generic
/// rules.
MsoFormula foca_to_mso(const FoFormula& phi, const RulePtr& f,
                       const std::vector<std::string>& sigma = {},
                       const std::vector<std::string>& delta = {},
                       uint64_t multiset_budget = kDefaultMultisetBudget);

/// One block of a prenex quantifier prefix: a maximal run of equally
/// quantified, equally sorted variables.
struct QuantBlock {
  Op quant = Op::Exists;
  bool first_order = false;
  std::vector<std::string> vars;
};

/// The alphabet of a rule translated from an MSO sentence: layered product
/// states S_1..S_λ(n) holding variable assignments (with choice/control
/// layers for first-order blocks), truth-check families per DNF clause, and
/// the two alternating error states.  The general variant additionally has
/// two departure-gate copies of S_2 sitting between S_2 and the S_1 fixed
/// points: a gate configuration with tag 1 everywhere is the unique
/// single-predecessor preimage of a fixed point, which lets the companion
/// formula force every component of a disconnected graph through the anchor
/// on the same step.  States are numbered e0, e1, then each S_l in
/// lexicographic layer-tuple order, then gates (tag 1 block, then tag 2),
/// then truth families by (clause, stage, tuple, mark, weight).
class LayeredStateSpace {
public:
  struct Layer {
    enum Kind { Variable, Choice, Control } kind = Variable;
    int block = 0;  // 1-based quantifier block index
    int size = 0;   // alphabet: 2^k_i, k_i, or 2
  };

  enum class StateKind { Error, Layer, Gate, Truth };
  struct StateInfo {
    StateKind kind = StateKind::Error;
    int type = 0;             // layers carried: l for S_l, 2 for gates,
                              // λ(n) for truth states
    std::vector<int> values;  // one entry per layer present
    int j = 0;                // clause index, 1-based (truth states)
    int m = 0;                // truth stage: 0 always for the connected
                              // variant; 0/1/2 for the general one
    int mark = 0;             // stages 1 and 2
    int w = 0;                // stage 2, 1..p_j; gate tag 1..2
  };

  /// `general` switches from single T_j families to the three-stage
  /// T_j^{0,1,2} families with per-clause primes.
  static LayeredStateSpace make(const std::vector<QuantBlock>& blocks,
                                int clause_count, bool general,
                                uint64_t state_budget = kDefaultStateBudget);

  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<QuantBlock>& blocks() const { return blocks_; }
  bool first_order_block(int i) const { return blocks_[i - 1].first_order; }
  int block_size(int i) const {
    return static_cast<int>(blocks_[i - 1].vars.size());
  }
  int omega(int i) const { return omega_[i]; }
  int lambda(int i) const { return lambda_[i]; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const std::vector<Layer>& layers() const { return layers_; }
  bool general() const { return general_; }
  int clause_count() const { return d_; }
  const std::vector<int>& primes() const { return primes_; }

  int state_count() const { return static_cast<int>(info_.size()); }
  const StateInfo& info(int s) const { return info_[s]; }
  const std::vector<std::string>& state_names() const { return names_; }

  /// π: drop the last layer/component; -1 when undefined (errors, type 1).
  int project(int s) const { return projected_[s]; }
  /// Small integer distinguishing error / each S_l / each truth family.
  int type_id(int s) const { return type_id_[s]; }

  /// Component reads, -1 when the layer is absent from the state.
  int variable_value(int s, int block, int comp) const;
  int choice_value(int s, int block) const;   // 1..k_i
  int control_value(int s, int block) const;

  /// Encodes a layer-state from its per-layer values (prefix of length l).
  int encode_layer_state(int l, const std::vector<int>& values) const;

private:
  std::vector<QuantBlock> blocks_;
  std::vector<int> omega_, lambda_;  // index 0 unused
  std::vector<Layer> layers_;
  bool general_ = false;
  int d_ = 0;
  std::vector<int> primes_;

  std::vector<StateInfo> info_;
  std::vector<std::string> names_;
  std::vector<int> projected_;
  std::vector<int> type_id_;
  std::vector<uint64_t> type_size_;    // |S_l|, index 1..λ(n)
  std::vector<uint64_t> type_offset_;  // first state id of S_l
  std::vector<int> var_layer_, choice_layer_, control_layer_;  // per block
};

/// Output of the MSO → (FO, rule) translations.  `good[i-1]` is the
/// restriction formula good_i over y1..yi and `truth` the final truth check
/// over yn; both are exposed for the lemma-level probes.
struct MsoToFocaResult {
  FoFormula phi;
  RulePtr rule;
  LayeredStateSpace space;
  MsoFormula prenexed;
  std::vector<FoFormula> good;
  FoFormula truth;
};

/// Connected-graph variant: one truth-check family per DNF clause; the FO
/// formula depends only on the prefix signature of Ψ.
MsoToFocaResult mso_to_foca_connected(
    const MsoFormula& psi, uint64_t state_budget = kDefaultStateBudget);

/// General variant: blocks are degrouped to singletons and clause choice is
/// checked through the preimage-counting families T_j^{0,1,2}, making the
/// FO formula depend on the matrix as well.
MsoToFocaResult mso_to_foca(const MsoFormula& psi,
                            uint64_t state_budget = kDefaultStateBudget);

/// Rebuilds a translated rule from {"kind":"translated","variant":...,
/// "psi": "<sentence>"}.
RulePtr translated_rule_from_json(const Json& j);

}  // namespace gca
