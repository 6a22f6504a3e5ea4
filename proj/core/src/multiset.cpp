#include "gca/multiset.hpp"

#include <algorithm>

#include "gca/error.hpp"

namespace gca {

WordTable::WordTable(int letters, int radius)
    : letters_(letters), radius_(radius) {
  if (letters < 0) throw ValidationError("word table needs letters >= 0");
  if (radius < 0) throw ValidationError("word table needs radius >= 0");
  parent_.push_back(-1);
  last_.push_back(-1);
  length_.push_back(0);
  level_start_.push_back(0);
  int level_begin = 0;
  for (int len = 1; len <= radius; ++len) {
    int level_end = static_cast<int>(parent_.size());
    level_start_.push_back(level_end);
    for (int p = level_begin; p < level_end; ++p) {
      for (int a = 0; a < letters; ++a) {
        parent_.push_back(p);
        last_.push_back(a);
        length_.push_back(len);
      }
    }
    level_begin = level_end;
  }
  level_start_.push_back(static_cast<int>(parent_.size()));
}

int WordTable::child(int id, int letter) const {
  int len = length_[id];
  if (len >= radius_) return -1;
  // Words of length len+1 are laid out as blocks of `letters_` children in
  // parent order, so the child offset is arithmetic.
  return level_start_[len + 1] + (id - level_start_[len]) * letters_ + letter;
}

std::vector<int> WordTable::word(int id) const {
  std::vector<int> out;
  while (id > 0) {
    out.push_back(last_[id]);
    id = parent_[id];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

int WordTable::word_id(std::span<const int> word) const {
  if (static_cast<int>(word.size()) > radius_) return -1;
  int id = 0;
  for (int a : word) {
    if (a < 0 || a >= letters_)
      throw ValidationError("letter index out of range in word");
    id = child(id, a);
  }
  return id;
}

CappedMultiset CappedMultiset::capped(int cap, std::vector<Entry> raw) {
  if (cap < 0) throw ValidationError("multiset cap must be >= 0");
  std::sort(raw.begin(), raw.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.word, a.state) < std::tie(b.word, b.state);
  });
  CappedMultiset m;
  m.cap_ = cap;
  for (size_t i = 0; i < raw.size();) {
    size_t j = i;
    int64_t total = 0;
    while (j < raw.size() && raw[j].word == raw[i].word &&
           raw[j].state == raw[i].state) {
      total += raw[j].count;
      ++j;
    }
    if (total < 0) throw ValidationError("multiset counts must be >= 0");
    int capped_count = static_cast<int>(std::min<int64_t>(total, cap));
    if (capped_count > 0)
      m.entries_.push_back({raw[i].word, raw[i].state, capped_count});
    i = j;
  }
  return m;
}

int CappedMultiset::count(int word, int state) const {
  Entry probe{word, state, 0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), probe,
                             [](const Entry& a, const Entry& b) {
                               return std::tie(a.word, a.state) <
                                      std::tie(b.word, b.state);
                             });
  if (it != entries_.end() && it->word == word && it->state == state)
    return it->count;
  return 0;
}

std::span<const CappedMultiset::Entry> CappedMultiset::letter_entries(
    int letters) const {
  auto lo = std::lower_bound(
      entries_.begin(), entries_.end(), 1,
      [](const Entry& e, int w) { return e.word < w; });
  auto hi = std::lower_bound(
      entries_.begin(), entries_.end(), letters + 1,
      [](const Entry& e, int w) { return e.word < w; });
  return {lo, hi};
}

int CappedMultiset::center_state() const {
  if (entries_.empty() || entries_[0].word != 0)
    throw ValidationError("pattern has no center entry");
  if (entries_[0].count != 1 ||
      (entries_.size() > 1 && entries_[1].word == 0))
    throw ValidationError("pattern center entry is not unique");
  return entries_[0].state;
}

bool CappedMultiset::has_center() const {
  return !entries_.empty() && entries_[0].word == 0 &&
         entries_[0].count == 1 &&
         (entries_.size() == 1 || entries_[1].word != 0);
}

void CappedMultiset::push(int word, int state, int count) {
  entries_.push_back({word, state, count});
}

void pattern_into(const WordTable& words,
                  const std::vector<std::vector<int>>& reach_sets,
                  std::span<const int> states, int num_states, int cap,
                  PatternScratch& scratch, CappedMultiset& out) {
  out.reset(cap);
  scratch.state_count.assign(num_states, 0);
  scratch.touched.clear();
  for (int w = 0; w < words.size(); ++w) {
    for (int v : reach_sets[w]) {
      int s = states[v];
      if (scratch.state_count[s]++ == 0) scratch.touched.push_back(s);
    }
    std::sort(scratch.touched.begin(), scratch.touched.end());
    for (int s : scratch.touched) {
      out.push(w, s, std::min(scratch.state_count[s], cap));
      scratch.state_count[s] = 0;
    }
    scratch.touched.clear();
  }
}

CappedMultiset pattern(const LabeledGraph& g, std::span<const int> states,
                       int num_states, int v, int radius, int cap,
                       bool symmetric) {
  WordTable words(static_cast<int>(g.delta().size()), radius);
  std::vector<std::vector<int>> reach_sets(words.size());
  reach_sets[0] = {v};
  for (int w = 1; w < words.size(); ++w) {
    auto seq = words.word(w);
    reach_sets[w] = reach(g, v, seq, symmetric).elements();
  }
  PatternScratch scratch;
  CappedMultiset out;
  pattern_into(words, reach_sets, states, num_states, cap, scratch, out);
  return out;
}

std::vector<std::vector<std::vector<int>>> build_reach_lists(
    const LabeledGraph& g, const WordTable& words, bool symmetric) {
  int n = g.vertex_count();
  std::vector<std::vector<std::vector<int>>> lists(n);
  for (int v = 0; v < n; ++v) {
    lists[v].resize(words.size());
    lists[v][0] = {v};
    // Extend level by level: endpoints of wa are the a-neighbors of the
    // endpoints of w, deduplicated.
    for (int w = 0; w < words.size(); ++w) {
      if (words.length(w) >= words.radius()) continue;
      for (int a = 0; a < words.letters(); ++a) {
        int cw = words.child(w, a);
        std::vector<int>& out = lists[v][cw];
        for (int u : lists[v][w]) {
          const std::vector<int>& fwd = g.out(a, u);
          out.insert(out.end(), fwd.begin(), fwd.end());
          if (symmetric) {
            const std::vector<int>& bwd = g.in(a, u);
            out.insert(out.end(), bwd.begin(), bwd.end());
          }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
      }
    }
  }
  return lists;
}

}  // namespace gca
