#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gca/labeled_graph.hpp"
#include "gca/local_rule.hpp"
#include "gca/multiset.hpp"

namespace gca {

/// Number of configurations |S|^|V|; throws BudgetError past 2^63.
uint64_t config_count(int num_states, int num_vertices);

/// Mixed-radix index of a configuration; the first vertex is the most
/// significant digit, so lexicographic order on state vectors matches
/// numeric order on indices.
uint64_t config_index(std::span<const int> states, int num_states);
void decode_config(uint64_t index, int num_states, std::span<int> out);

/// A rule bound to a graph: precomputed walk endpoints for every (vertex,
/// word) pair, ready to apply the rule vertexwise.
class GlobalMap {
public:
  GlobalMap(LabeledGraph graph, RulePtr rule);

  const LabeledGraph& graph() const { return graph_; }
  const LocalRule& rule() const { return *rule_; }
  const RulePtr& rule_ptr() const { return rule_; }
  int num_states() const {
    return static_cast<int>(rule_->states().size());
  }
  uint64_t num_configs() const;

  /// One synchronous step; `out` must not alias `states`.
  void apply_into(std::span<const int> states, std::span<int> out) const;
  std::vector<int> apply(std::span<const int> states) const;

  /// Pattern read off for one vertex (exposed for tests and translators).
  void pattern_at(std::span<const int> states, int v, PatternScratch& scratch,
                  CappedMultiset& out) const;
  /// Sigma index (in the rule's label space) a vertex presents to the rule.
  int sigma_at(int v) const { return sigma_of_vertex_[v]; }

  /// Parses configuration text "s0,s1,..." (state names in vertex order)
  /// and formats one back.
  std::vector<int> parse_states(const std::string& text) const;
  std::string format_states(std::span<const int> states) const;

private:
  LabeledGraph graph_;
  RulePtr rule_;
  WordTable words_;
  std::vector<std::vector<std::vector<int>>> reach_lists_;
  std::vector<int> sigma_of_vertex_;
};

/// 64-bit FNV-1a over the canonical graph serialization and the rule
/// fingerprint payload; keys the on-disk transition-table cache.
uint64_t table_fingerprint(const LabeledGraph& g, const LocalRule& rule);

/// Materialized global map: successor per configuration index plus the
/// exact predecessor lists (CSR layout).
class TransitionTable {
public:
  static constexpr uint64_t kDefaultBudget = uint64_t{1} << 24;

  /// Builds (or loads from `cache_dir` when non-empty) the table for `map`.
  /// Throws BudgetError when |S|^|V| exceeds `budget`.  `jobs` workers fill
  /// disjoint index ranges; the result is identical for any job count.
  static TransitionTable build(const GlobalMap& map,
                               uint64_t budget = kDefaultBudget, int jobs = 1,
                               const std::string& cache_dir = {});

  uint64_t size() const { return successor_.size(); }
  uint64_t fingerprint() const { return fingerprint_; }
  /// True when build() found a valid cache file instead of recomputing.
  bool loaded_from_cache() const { return from_cache_; }

  uint32_t successor(uint64_t index) const { return successor_[index]; }
  std::span<const uint32_t> predecessors(uint64_t index) const {
    return {pred_data_.data() + pred_offset_[index],
            pred_data_.data() + pred_offset_[index + 1]};
  }
  uint32_t predecessor_count(uint64_t index) const {
    return pred_offset_[index + 1] - pred_offset_[index];
  }

private:
  TransitionTable() = default;
  void build_predecessors();

  uint64_t fingerprint_ = 0;
  bool from_cache_ = false;
  std::vector<uint32_t> successor_;
  std::vector<uint32_t> pred_offset_;
  std::vector<uint32_t> pred_data_;
};

struct OrbitResult {
  bool conclusive = false;
  uint64_t transient = 0;  // steps before the cycle is entered
  uint64_t period = 0;     // minimal period of the reached cycle
  /// Configuration indices c, F(c), ..., up to the last configuration before
  /// the orbit repeats (transient + period entries).
  std::vector<uint64_t> sequence;
};

/// Exact orbit through a materialized table; always conclusive.
OrbitResult orbit(const TransitionTable& table, uint64_t start);

/// Direct-iteration orbit (Brent's cycle detection, constant memory until
/// the final replay).  Inconclusive only when the orbit does not close
/// within max_steps, which cannot happen once max_steps >= |S|^|V|.
OrbitResult orbit(const GlobalMap& map, std::span<const int> start,
                  uint64_t max_steps);

}  // namespace gca
