#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gca/labeled_graph.hpp"

namespace gca {

/// All words of length <= radius over an alphabet of `letters` symbols,
/// identified by dense ids.  Id 0 is the empty word; longer words follow
/// ordered by length, then lexicographically by letter index.
class WordTable {
public:
  WordTable(int letters, int radius);

  int letters() const { return letters_; }
  int radius() const { return radius_; }
  int size() const { return static_cast<int>(parent_.size()); }

  int length(int id) const { return length_[id]; }
  int parent(int id) const { return parent_[id]; }
  int last_letter(int id) const { return last_[id]; }
  /// Child id of `id` extended by `letter`, or -1 past the radius.
  int child(int id, int letter) const;

  std::vector<int> word(int id) const;
  /// Id of a word given as letter indices; -1 if longer than the radius.
  int word_id(std::span<const int> word) const;

private:
  int letters_;
  int radius_;
  std::vector<int> parent_;
  std::vector<int> last_;
  std::vector<int> length_;
  std::vector<int> level_start_;  // first id of each length
};

/// A k-capped multiset over (word, state) pairs: counts live in {0..k} and
/// are stored sparsely (only positive entries, sorted by (word, state)).
/// Patterns extracted from configurations satisfy the center invariant:
/// exactly one entry with the empty word, count 1, holding the center state.
class CappedMultiset {
public:
  struct Entry {
    int32_t word;
    int32_t state;
    int32_t count;
    bool operator==(const Entry&) const = default;
  };

  CappedMultiset() = default;
  /// Builds from raw counts, capping every count at k (the cap is a min:
  /// anything above k collapses to k).  Entries with count 0 are dropped.
  static CappedMultiset capped(int cap, std::vector<Entry> raw_counts);

  int cap() const { return cap_; }
  int count(int word, int state) const;
  std::span<const Entry> entries() const { return entries_; }
  /// Entries for words of length exactly 1, assuming word ids 1..letters.
  std::span<const Entry> letter_entries(int letters) const;

  /// State of the unique empty-word entry; throws if the center invariant
  /// does not hold.
  int center_state() const;
  bool has_center() const;

  bool operator==(const CappedMultiset&) const = default;

  // Mutating interface used by the pattern builder; keeps entries sorted as
  // long as pushes happen in (word, state) order.
  void reset(int cap) {
    cap_ = cap;
    entries_.clear();
  }
  void push(int word, int state, int count);

private:
  int cap_ = 0;
  std::vector<Entry> entries_;
};

/// Reusable scratch space for pattern extraction; one instance per thread.
struct PatternScratch {
  std::vector<int> state_count;
  std::vector<int> touched;
};

/// The k-capped pattern of configuration `states` around vertex v: for every
/// word w of length <= radius, the capped number of vertices in each state
/// among the endpoints of w-walks from v.  `reach_sets[word]` must hold the
/// endpoint list for every word id of `words` at this vertex.
void pattern_into(const WordTable& words,
                  const std::vector<std::vector<int>>& reach_sets,
                  std::span<const int> states, int num_states, int cap,
                  PatternScratch& scratch, CappedMultiset& out);

/// Convenience form computing reach sets on the fly.
CappedMultiset pattern(const LabeledGraph& g, std::span<const int> states,
                       int num_states, int v, int radius, int cap,
                       bool symmetric = false);

/// Per-vertex endpoint lists for every word id (shared by patterns and the
/// global map).  reach_lists[v][word] lists the endpoints of word-walks
/// starting at v.
std::vector<std::vector<std::vector<int>>> build_reach_lists(
    const LabeledGraph& g, const WordTable& words, bool symmetric);

}  // namespace gca
