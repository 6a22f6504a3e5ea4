#include "gca/translate.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gca/error.hpp"

namespace gca {

namespace {

std::string join_dots(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Layered state space

LayeredStateSpace LayeredStateSpace::make(const std::vector<QuantBlock>& blocks,
                                          int clause_count, bool general,
                                          uint64_t state_budget) {
  if (blocks.empty())
    throw ValidationError(
        "a translated sentence needs at least one quantifier block");
  LayeredStateSpace sp;
  sp.blocks_ = blocks;
  sp.general_ = general;
  sp.d_ = clause_count;

  int n = static_cast<int>(blocks.size());
  sp.omega_.assign(n + 1, 0);
  sp.lambda_.assign(n + 1, 0);
  sp.var_layer_.assign(n + 1, 0);
  sp.choice_layer_.assign(n + 1, 0);
  sp.control_layer_.assign(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    const auto& b = blocks[i - 1];
    int k = static_cast<int>(b.vars.size());
    if (k == 0) throw ValidationError("empty quantifier block");
    if (k > 20)
      throw BudgetError("a block of " + std::to_string(k) +
                        " variables needs a layer of 2^" + std::to_string(k) +
                        " assignment values; the state budget is " +
                        std::to_string(state_budget));
    sp.omega_[i] = sp.omega_[i - 1] + (b.first_order ? 1 : 0);
    sp.lambda_[i] = i + 2 * sp.omega_[i];
    if (b.first_order) {
      sp.var_layer_[i] = sp.lambda_[i] - 2;
      sp.choice_layer_[i] = sp.lambda_[i] - 1;
      sp.control_layer_[i] = sp.lambda_[i];
      sp.layers_.push_back({Layer::Variable, i, 1 << k});
      sp.layers_.push_back({Layer::Choice, i, k});
      sp.layers_.push_back({Layer::Control, i, 2});
    } else {
      sp.var_layer_[i] = sp.lambda_[i];
      sp.layers_.push_back({Layer::Variable, i, 1 << k});
    }
  }
  int L = static_cast<int>(sp.layers_.size());
  bool gates = general && L >= 2;

  auto over_budget = [&](uint64_t count) {
    throw BudgetError("the layered alphabet for this sentence needs " +
                      std::to_string(count) + " states; the budget is " +
                      std::to_string(state_budget));
  };
  sp.type_size_.assign(L + 1, 0);
  sp.type_offset_.assign(L + 1, 0);
  uint64_t total = 2;
  uint64_t prod = 1;
  for (int l = 1; l <= L; ++l) {
    prod *= static_cast<uint64_t>(sp.layers_[l - 1].size);
    if (prod > state_budget) over_budget(total + prod);
    sp.type_size_[l] = prod;
    sp.type_offset_[l] = total;
    total += prod;
    if (total > state_budget) over_budget(total);
  }
  uint64_t gate_base = total;
  uint64_t gate_total = gates ? 2 * sp.type_size_[2] : 0;
  total += gate_total;
  if (total > state_budget) over_budget(total);

  if (general) {
    for (int c = 2; static_cast<int>(sp.primes_.size()) < clause_count; ++c) {
      bool prime = true;
      for (int q = 2; q * q <= c; ++q)
        if (c % q == 0) {
          prime = false;
          break;
        }
      if (prime) sp.primes_.push_back(c);
    }
  }

  uint64_t per_tuple = 0;  // truth states per S_λ(n) tuple
  if (general) {
    for (int j = 1; j <= clause_count; ++j)
      per_tuple += 1 + 2 + 2 * static_cast<uint64_t>(sp.primes_[j - 1]);
  } else {
    per_tuple = static_cast<uint64_t>(clause_count);
  }
  uint64_t truth_total = per_tuple * sp.type_size_[L];
  if (total + truth_total > state_budget) over_budget(total + truth_total);

  // Materialize every state: values, names, π, and the type id used by the
  // validity conditions (error = 0, S_l = l, truth families after λ(n)).
  int count = static_cast<int>(total + truth_total);
  sp.info_.reserve(count);
  sp.names_.reserve(count);
  sp.projected_.reserve(count);
  sp.type_id_.reserve(count);
  auto emit = [&](StateInfo in, std::string name, int projected, int type_id) {
    sp.info_.push_back(std::move(in));
    sp.names_.push_back(std::move(name));
    sp.projected_.push_back(projected);
    sp.type_id_.push_back(type_id);
  };
  emit({StateKind::Error, 0, {}, 0, 0, 0, 0}, "e0", -1, 0);
  emit({StateKind::Error, 0, {}, 0, 0, 0, 0}, "e1", -1, 0);

  // Layer tuples in lexicographic order, layer 1 most significant; the j-th
  // emitted tuple of S_l therefore has id type_offset_[l] + j.
  auto for_each_tuple = [&](int l, auto&& body) {
    std::vector<int> values(l, 0);
    while (true) {
      body(values);
      int pos = l - 1;
      while (pos >= 0 && ++values[pos] == sp.layers_[pos].size)
        values[pos--] = 0;
      if (pos < 0) break;
    }
  };
  for (int l = 1; l <= L; ++l)
    for_each_tuple(l, [&](const std::vector<int>& values) {
      uint64_t idx = static_cast<uint64_t>(sp.info_.size()) - sp.type_offset_[l];
      int pi;
      if (l == 1)
        pi = -1;  // fixed points
      else if (l == 2 && gates)
        pi = static_cast<int>(gate_base + idx);  // descend via an open gate
      else
        pi = static_cast<int>(sp.type_offset_[l - 1] +
                              idx / sp.layers_[l - 1].size);
      emit({StateKind::Layer, l, values, 0, 0, 0, 0},
           "t" + std::to_string(l) + ":" + join_dots(values), pi, l);
    });
  // Gates carry a full S_2 tuple plus a tag; only tag 1 is ever produced, so
  // tag-2 gates have no predecessors and an all-tag-1 gate configuration is
  // the unique preimage counted by #pre = 1 below a fixed point.
  if (gates)
    for (int u = 1; u <= 2; ++u)
      for_each_tuple(2, [&](const std::vector<int>& values) {
        emit({StateKind::Gate, 2, values, 0, 0, 0, u},
             "g" + std::to_string(u) + ":" + join_dots(values),
             static_cast<int>(sp.type_offset_[1] + values[0]), L + u);
      });

  if (!general) {
    for (int j = 1; j <= clause_count; ++j)
      for_each_tuple(L, [&](const std::vector<int>& values) {
        emit({StateKind::Truth, L, values, j, 0, 0, 0},
             "c" + std::to_string(j) + ":" + join_dots(values),
             sp.encode_layer_state(L, values), L + j);
      });
  } else {
    int tid0 = L + (gates ? 2 : 0);
    for (int j = 1; j <= clause_count; ++j) {
      int pj = sp.primes_[j - 1];
      int base0 = static_cast<int>(sp.info_.size());
      for_each_tuple(L, [&](const std::vector<int>& values) {
        emit({StateKind::Truth, L, values, j, 0, 0, 0},
             "c" + std::to_string(j) + ".0:" + join_dots(values),
             sp.encode_layer_state(L, values), tid0 + (j - 1) * 3 + 1);
      });
      int base1 = static_cast<int>(sp.info_.size());
      for_each_tuple(L, [&](const std::vector<int>& values) {
        int t = static_cast<int>(sp.info_.size()) - base1;
        for (int mark = 0; mark <= 1; ++mark)
          emit({StateKind::Truth, L, values, j, 1, mark, 0},
               "c" + std::to_string(j) + ".1:" + join_dots(values) + ".m" +
                   std::to_string(mark),
               base0 + t / 2, tid0 + (j - 1) * 3 + 2);
      });
      int base2 = static_cast<int>(sp.info_.size());
      for_each_tuple(L, [&](const std::vector<int>& values) {
        int t = static_cast<int>(sp.info_.size()) - base2;
        for (int mark = 0; mark <= 1; ++mark)
          for (int w = 1; w <= pj; ++w)
            emit({StateKind::Truth, L, values, j, 2, mark, w},
                 "c" + std::to_string(j) + ".2:" + join_dots(values) + ".m" +
                     std::to_string(mark) + ".w" + std::to_string(w),
                 base1 + t / (2 * pj) * 2 + mark, tid0 + (j - 1) * 3 + 3);
      });
    }
  }
  return sp;
}

int LayeredStateSpace::variable_value(int s, int block, int comp) const {
  const StateInfo& in = info_[s];
  if (in.kind == StateKind::Error) return -1;
  int pos = var_layer_[block];
  int len = in.kind == StateKind::Truth ? layer_count() : in.type;
  if (pos > len) return -1;
  return (in.values[pos - 1] >> (comp - 1)) & 1;
}

int LayeredStateSpace::choice_value(int s, int block) const {
  const StateInfo& in = info_[s];
  if (in.kind == StateKind::Error) return -1;
  int pos = choice_layer_[block];
  int len = in.kind == StateKind::Truth ? layer_count() : in.type;
  if (pos == 0 || pos > len) return -1;
  return in.values[pos - 1] + 1;  // stored 0-based
}

int LayeredStateSpace::control_value(int s, int block) const {
  const StateInfo& in = info_[s];
  if (in.kind == StateKind::Error) return -1;
  int pos = control_layer_[block];
  int len = in.kind == StateKind::Truth ? layer_count() : in.type;
  if (pos == 0 || pos > len) return -1;
  return in.values[pos - 1];
}

int LayeredStateSpace::encode_layer_state(int l,
                                          const std::vector<int>& values) const {
  uint64_t idx = 0;
  for (int p = 1; p <= l; ++p)
    idx = idx * static_cast<uint64_t>(layers_[p - 1].size) + values[p - 1];
  return static_cast<int>(type_offset_[l] + idx);
}

namespace {

// ---------------------------------------------------------------------------
// The translated rule: a DNF literal resolved to block/component positions.

struct LocalTerm {
  MsoAtom::Kind kind = MsoAtom::Eq;
  bool negated = false;
  int a = 0, b = 0;   // leftmost (first-order) variable: block, component
  int p = 0, q = 0;   // other variable (Edge/Eq/In)
  std::string label;  // Lab: σ', Edge: δ
  int label_id = -1;  // index in the bound alphabet, -1 when absent
};

class TranslatedRule final : public LocalRule {
public:
  TranslatedRule(LayeredStateSpace space,
                 std::vector<std::vector<LocalTerm>> clauses, bool general,
                 std::string psi)
      : space_(std::move(space)),
        clauses_(std::move(clauses)),
        general_(general),
        psi_(std::move(psi)) {
    precompute();
  }

  const std::vector<std::string>& states() const override {
    return space_.state_names();
  }
  int radius() const override { return 1; }
  int cap() const override { return 1; }

  int apply(int sigma, const CappedMultiset& pat) const override {
    if (!bound_)
      throw Error("translated rules read labels by name; bind to a graph");
    int s = pat.center_state();
    if (s == 0) return 1;
    if (s == 1) return 0;
    const auto& in = space_.info(s);
    bool valid = center_ok_[s];
    if (valid)
      for (const auto& e : pat.entries()) {
        if (e.word == 0) continue;
        if (e.state < 2 || space_.type_id(e.state) != space_.type_id(s) ||
            chi_tuple_[e.state] != chi_tuple_[s]) {
          valid = false;
          break;
        }
      }
    if (!valid) return 0;
    if (in.kind == LayeredStateSpace::StateKind::Truth && in.m == 0)
      for (const auto& t : clauses_[in.j - 1])
        if (!term_holds(sigma, pat, s, t)) return 0;
    if (in.kind == LayeredStateSpace::StateKind::Layer && in.type == 1)
      return s;
    return space_.project(s);
  }

  std::shared_ptr<const LocalRule> bind(
      const std::vector<std::string>& sigma,
      const std::vector<std::string>& delta) const override {
    auto r = std::make_shared<TranslatedRule>(*this);
    r->bound_ = true;
    r->bound_sigma_ = sigma;
    r->bound_delta_ = delta;
    for (auto& clause : r->clauses_)
      for (auto& t : clause) {
        if (t.kind != MsoAtom::Lab && t.kind != MsoAtom::Edge) continue;
        const auto& pool = t.kind == MsoAtom::Lab ? sigma : delta;
        auto it = std::find(pool.begin(), pool.end(), t.label);
        t.label_id =
            it == pool.end() ? -1 : static_cast<int>(it - pool.begin());
      }
    return r;
  }

  Json to_json() const override {
    Json j;
    j["kind"] = "translated";
    j["variant"] = general_ ? "general" : "connected";
    j["psi"] = psi_;
    return j;
  }

  std::string fingerprint_payload() const override {
    std::string out = "translated:";
    out += general_ ? "general" : "connected";
    out += ":" + psi_;
    if (bound_) {
      out += "|sigma=";
      for (const auto& s : bound_sigma_) out += s + ",";
      out += "|delta=";
      for (const auto& d : bound_delta_) out += d + ",";
    }
    return out;
  }

  const LayeredStateSpace& space() const { return space_; }

private:
  void precompute() {
    int n = space_.block_count();
    int count = space_.state_count();
    center_ok_.assign(count, 1);
    chi_tuple_.resize(count);
    for (int s = 0; s < count; ++s) {
      const auto& in = space_.info(s);
      if (in.kind == LayeredStateSpace::StateKind::Error) continue;
      for (int i = 1; i <= n; ++i) {
        if (!space_.first_order_block(i)) continue;
        int chi = space_.choice_value(s, i);
        if (chi < 0) continue;  // layer beyond this state's type
        chi_tuple_[s].push_back(chi);
        if (space_.control_value(s, i) == 1 &&
            space_.variable_value(s, i, chi) != 1)
          center_ok_[s] = 0;
      }
      if (in.kind == LayeredStateSpace::StateKind::Truth && in.m == 2 &&
          in.mark == 0 && in.w != 1)
        center_ok_[s] = 0;
    }
  }

  bool term_holds(int sigma, const CappedMultiset& pat, int s,
                  const LocalTerm& t) const {
    if (space_.variable_value(s, t.a, t.b) == 0) return true;
    switch (t.kind) {
      case MsoAtom::Lab:
        return t.negated ? sigma != t.label_id : sigma == t.label_id;
      case MsoAtom::Edge: {
        bool found = false;
        if (t.label_id >= 0)
          for (const auto& e : pat.entries())
            if (e.word == t.label_id + 1 && e.state >= 2 &&
                space_.variable_value(e.state, t.p, t.q) == 1) {
              found = true;
              break;
            }
        return t.negated ? !found : found;
      }
      case MsoAtom::Eq:
      case MsoAtom::In: {
        int v = space_.variable_value(s, t.p, t.q);
        return t.negated ? v == 0 : v == 1;
      }
    }
    return false;
  }

  LayeredStateSpace space_;
  std::vector<std::vector<LocalTerm>> clauses_;
  bool general_;
  std::string psi_;
  bool bound_ = false;
  std::vector<std::string> bound_sigma_, bound_delta_;
  std::vector<uint8_t> center_ok_;
  std::vector<std::vector<int>> chi_tuple_;
};

// ---------------------------------------------------------------------------
// Orbit logic -> graph logic

class StepTranslator {
public:
  StepTranslator(const RulePtr& f, std::vector<std::string> sigma,
                 std::vector<std::string> delta, uint64_t budget)
      : sigma_(std::move(sigma)),
        delta_(std::move(delta)),
        words_(static_cast<int>(delta_.size()), f->radius()) {
    bound_ = f->bind(sigma_, delta_);
    rule_ = bound_ ? bound_.get() : f.get();
    n_ = static_cast<int>(rule_->states().size());
    cap_ = rule_->cap();
    symmetric_ = rule_->symmetric_neighborhood();
    if (n_ > 20)
      throw BudgetError(
          "state-count formulas enumerate subsets of the rule's " +
          std::to_string(n_) + " states; 20 is the most this supports");
    int w = words_.size();
    unsigned __int128 mu = static_cast<unsigned>(n_);
    for (int i = 0; i < (w - 1) * n_; ++i) {
      mu *= static_cast<unsigned>(cap_ + 1);
      if (mu > budget)
        throw BudgetError(
            "translating -> conjoins over every capped pattern of the rule: "
            "there are at least " +
            std::to_string(static_cast<uint64_t>(mu)) +
            "; the budget is " + std::to_string(budget));
    }
  }

  MsoFormula run(const FoFormula& phi) {
    auto fv = free_vars(phi);
    if (!fv.empty())
      throw ValidationError("foca-to-mso needs a sentence; \"" + fv[0] +
                            "\" occurs free");
    auto pren = prenex(phi);
    std::vector<std::pair<Op, std::string>> prefix;
    FoFormula matrix = pren;
    while (matrix->op == Op::Forall || matrix->op == Op::Exists) {
      prefix.emplace_back(matrix->op, matrix->var);
      matrix = matrix->kids[0];
    }
    MsoFormula body = matrix_rec(matrix);
    // Each configuration variable y becomes |S| set variables; quantifiers
    // carry the representation guard so that only tuples encoding a real
    // configuration (every vertex in some set) are ranged over.
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
      const auto& y = it->second;
      MsoFormula inner =
          it->first == Op::Exists
              ? make_and<MsoAtom>({repr(y), std::move(body)})
              : make_implies(repr(y), std::move(body));
      const auto sets = set_vars(y);
      for (auto sit = sets.rbegin(); sit != sets.rend(); ++sit)
        inner = make_quant(it->first, *sit, std::move(inner));
      body = std::move(inner);
    }
    return body;
  }

private:
  MsoFormula matrix_rec(const FoFormula& f) {
    switch (f->op) {
      case Op::Atom: {
        const FoAtom& a = f->atom;
        if (a.kind == FoAtom::Eq) return eq_formula(a.x, a.y);
        if (a.kind == FoAtom::Step) return step_formula(a.x, a.y);
        throw ValidationError("only = and -> atoms translate to graph logic "
                              "(got \"" +
                              to_string(make_atom(a)) +
                              "\"); expand counting atoms first");
      }
      case Op::Not:
        return make_not(matrix_rec(f->kids[0]));
      case Op::And:
      case Op::Or: {
        std::vector<MsoFormula> kids;
        kids.reserve(f->kids.size());
        for (const auto& k : f->kids) kids.push_back(matrix_rec(k));
        auto n = std::make_shared<Node<MsoAtom>>();
        n->op = f->op;
        n->kids = std::move(kids);
        return n;
      }
      default:
        throw Error("quantifier inside a prenex matrix");
    }
  }

  const std::vector<std::string>& set_vars(const std::string& y) {
    auto it = set_vars_.find(y);
    if (it != set_vars_.end()) return it->second;
    std::vector<std::string> names;
    for (int i = 1; i <= n_; ++i)
      names.push_back("X" + y + "_" + std::to_string(i));
    return set_vars_.emplace(y, std::move(names)).first->second;
  }

  // Vertex x is in state s under y's encoding: x lies in exactly the sets of
  // some (s+1)-element index subset.
  MsoFormula state_at(int s, const std::string& x, const std::string& y) {
    std::string key = std::to_string(s) + "|" + x + "|" + y;
    auto it = state_memo_.find(key);
    if (it != state_memo_.end()) return it->second;
    const auto& sets = set_vars(y);
    std::vector<MsoFormula> pos(n_), neg(n_);
    for (int i = 0; i < n_; ++i) {
      pos[i] = mso_in(x, sets[i]);
      neg[i] = make_not(pos[i]);
    }
    std::vector<MsoFormula> alts;
    for (uint32_t mask = 0; mask < (1u << n_); ++mask) {
      if (std::popcount(mask) != s + 1) continue;
      std::vector<MsoFormula> lits;
      for (int i = 0; i < n_; ++i)
        lits.push_back((mask >> i) & 1 ? pos[i] : neg[i]);
      alts.push_back(make_and(std::move(lits)));
    }
    return state_memo_.emplace(key, make_or(std::move(alts))).first->second;
  }

  MsoFormula step_edge(int letter, const std::string& a,
                       const std::string& b) {
    auto e = mso_edge(delta_[letter], a, b);
    if (!symmetric_) return e;
    return make_or<MsoAtom>({std::move(e), mso_edge(delta_[letter], b, a)});
  }

  // There is a w-walk from `from` to `to`.
  MsoFormula walk(int word_id, const std::string& from, const std::string& to) {
    std::string key = std::to_string(word_id) + "|" + from + "|" + to;
    auto it = walk_memo_.find(key);
    if (it != walk_memo_.end()) return it->second;
    auto letters = words_.word(word_id);
    MsoFormula out;
    if (letters.empty()) {
      out = mso_eq(from, to);
    } else {
      std::vector<std::string> stops{from};
      for (size_t i = 0; i + 1 < letters.size(); ++i)
        stops.push_back("m" + std::to_string(++mid_counter_));
      stops.push_back(to);
      std::vector<MsoFormula> steps;
      for (size_t i = 0; i < letters.size(); ++i)
        steps.push_back(step_edge(letters[i], stops[i], stops[i + 1]));
      out = make_and(std::move(steps));
      for (size_t i = stops.size() - 2; i >= 1; --i)
        out = make_exists(stops[i], std::move(out));
    }
    return walk_memo_.emplace(key, std::move(out)).first->second;
  }

  // At least `count` vertices reached from c by w-walks are in state s.
  MsoFormula at_least(int s, int word_id, int count, const std::string& y,
                      const std::string& c) {
    std::string key = std::to_string(s) + "|" + std::to_string(word_id) + "|" +
                      std::to_string(count) + "|" + y + "|" + c;
    auto it = count_memo_.find(key);
    if (it != count_memo_.end()) return it->second;
    std::vector<std::string> copies;
    for (int i = 0; i < count; ++i)
      copies.push_back("p" + std::to_string(++copy_counter_));
    std::vector<MsoFormula> kids;
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j)
        kids.push_back(make_not(mso_eq(copies[i], copies[j])));
    for (int i = 0; i < count; ++i) {
      kids.push_back(walk(word_id, c, copies[i]));
      kids.push_back(state_at(s, copies[i], y));
    }
    MsoFormula out = make_and(std::move(kids));
    for (auto rit = copies.rbegin(); rit != copies.rend(); ++rit)
      out = make_exists(*rit, std::move(out));
    return count_memo_.emplace(key, std::move(out)).first->second;
  }

  // The capped count of state-s vertices along w-walks from c is exactly
  // `count` (a count equal to the cap means "at least cap").
  MsoFormula count_is(int s, int word_id, int count, const std::string& y,
                      const std::string& c) {
    std::vector<MsoFormula> parts;
    if (count >= 1) parts.push_back(at_least(s, word_id, count, y, c));
    if (count < cap_)
      parts.push_back(make_not(at_least(s, word_id, count + 1, y, c)));
    return make_and(std::move(parts));
  }

  // y2 is the successor configuration of y1: every vertex's pattern under y1
  // forces its y2-state through the rule.
  MsoFormula step_formula(const std::string& y1, const std::string& y2) {
    std::string key = y1 + "|" + y2;
    auto it = step_memo_.find(key);
    if (it != step_memo_.end()) return it->second;
    const std::string c = "x";
    int w = words_.size();
    std::vector<MsoFormula> conjuncts;
    std::vector<int> counts(static_cast<size_t>(w - 1) * n_, 0);
    CappedMultiset mu;
    for (int sg = 0; sg < static_cast<int>(sigma_.size()); ++sg)
      for (int s0 = 0; s0 < n_; ++s0) {
        std::fill(counts.begin(), counts.end(), 0);
        while (true) {
          mu.reset(cap_);
          mu.push(0, s0, 1);
          for (int wi = 1; wi < w; ++wi)
            for (int st = 0; st < n_; ++st) {
              int cnt = counts[static_cast<size_t>(wi - 1) * n_ + st];
              if (cnt > 0) mu.push(wi, st, cnt);
            }
          std::vector<MsoFormula> premise;
          premise.push_back(mso_lab(c, sigma_[sg]));
          for (int st = 0; st < n_; ++st)
            for (int wi = 0; wi < w; ++wi) {
              int cnt = wi == 0 ? (st == s0 ? 1 : 0)
                                : counts[static_cast<size_t>(wi - 1) * n_ + st];
              premise.push_back(count_is(st, wi, cnt, y1, c));
            }
          int target = rule_->apply(sg, mu);
          conjuncts.push_back(make_implies(make_and(std::move(premise)),
                                           state_at(target, c, y2)));
          size_t pos = counts.size();
          while (pos > 0 && ++counts[pos - 1] == cap_ + 1) counts[--pos] = 0;
          if (pos == 0 && !counts.empty() && counts[0] == 0) break;
          if (counts.empty()) break;
        }
      }
    auto out = make_forall(c, make_and(std::move(conjuncts)));
    return step_memo_.emplace(key, std::move(out)).first->second;
  }

  MsoFormula eq_formula(const std::string& y1, const std::string& y2) {
    std::string key = y1 + "|" + y2;
    auto it = eq_memo_.find(key);
    if (it != eq_memo_.end()) return it->second;
    const std::string c = "x";
    std::vector<MsoFormula> alts;
    for (int s = 0; s < n_; ++s)
      alts.push_back(
          make_and<MsoAtom>({state_at(s, c, y1), state_at(s, c, y2)}));
    auto out = make_forall(c, make_or(std::move(alts)));
    return eq_memo_.emplace(key, std::move(out)).first->second;
  }

  // Every vertex is in some state: the tuple of sets encodes a configuration.
  MsoFormula repr(const std::string& y) {
    auto it = repr_memo_.find(y);
    if (it != repr_memo_.end()) return it->second;
    const std::string c = "x";
    std::vector<MsoFormula> alts;
    for (int s = 0; s < n_; ++s) alts.push_back(state_at(s, c, y));
    auto out = make_forall(c, make_or(std::move(alts)));
    return repr_memo_.emplace(y, std::move(out)).first->second;
  }

  std::vector<std::string> sigma_, delta_;
  WordTable words_;
  RulePtr bound_;
  const LocalRule* rule_ = nullptr;
  int n_ = 0;
  int cap_ = 0;
  bool symmetric_ = false;
  int mid_counter_ = 0;
  int copy_counter_ = 0;
  std::map<std::string, std::vector<std::string>> set_vars_;
  std::map<std::string, MsoFormula> state_memo_, walk_memo_, count_memo_,
      step_memo_, eq_memo_, repr_memo_;
};

// ---------------------------------------------------------------------------
// Graph logic -> orbit logic

FoFormula okfov(const std::string& c) {
  // Two steps ahead of c sits a control configuration; every configuration
  // that also reaches it in two steps must have exactly one sibling, which
  // pins choice components and kills stray control bits.
  return make_forall(
      "u", make_implies(fo_chain(c, "u", 2),
                        make_forall("w", make_implies(fo_chain("w", "u", 2),
                                                      fo_siblings1("w")))));
}

MsoToFocaResult translate_common(const MsoFormula& psi, bool general,
                                 uint64_t budget) {
  auto fv = free_vars(psi);
  if (!fv.empty())
    throw ValidationError("mso-to-foca needs a sentence; \"" + fv[0] +
                          "\" occurs free");
  auto pren = prenex(psi);
  std::vector<std::pair<Op, std::string>> prefix;
  MsoFormula matrix = pren;
  while (matrix->op == Op::Forall || matrix->op == Op::Exists) {
    prefix.emplace_back(matrix->op, matrix->var);
    matrix = matrix->kids[0];
  }
  if (prefix.empty()) {
    // A quantifier-free sentence has a constant matrix; a vacuous
    // existential keeps the alphabet construction non-degenerate.
    prefix.emplace_back(Op::Exists, "v0");
    pren = make_exists("v0", matrix);
  }

  std::vector<QuantBlock> blocks;
  for (const auto& [op, var] : prefix) {
    bool fo = !is_set_var(var);
    if (general || blocks.empty() || blocks.back().quant != op ||
        blocks.back().first_order != fo)
      blocks.push_back({op, fo, {}});
    blocks.back().vars.push_back(var);
  }
  std::map<std::string, std::pair<int, int>> pos;
  for (size_t i = 0; i < blocks.size(); ++i)
    for (size_t b = 0; b < blocks[i].vars.size(); ++b)
      pos[blocks[i].vars[b]] = {static_cast<int>(i + 1),
                                static_cast<int>(b + 1)};

  auto clauses = dnf(matrix);
  int d = static_cast<int>(clauses.size());
  std::vector<std::vector<LocalTerm>> terms(d);
  for (int j = 0; j < d; ++j)
    for (const auto& lit : clauses[j]) {
      const MsoAtom& a = lit.atom;
      if (is_set_var(a.x))
        throw ValidationError(
            "the first variable of every atom must be first-order (got \"" +
            a.x + "\")");
      LocalTerm t;
      t.kind = a.kind;
      t.negated = lit.negated;
      std::tie(t.a, t.b) = pos.at(a.x);
      if (a.kind == MsoAtom::Lab) {
        t.label = a.label;
      } else {
        if (a.kind == MsoAtom::In ? !is_set_var(a.y) : is_set_var(a.y))
          throw ValidationError("atom \"" + to_string(make_atom(a)) +
                                "\" mixes variable sorts");
        std::tie(t.p, t.q) = pos.at(a.y);
        if (a.kind == MsoAtom::Edge) t.label = a.label;
      }
      terms[j].push_back(t);
    }

  auto space = LayeredStateSpace::make(blocks, d, general, budget);
  auto rule = std::make_shared<TranslatedRule>(space, std::move(terms),
                                               general, to_string(psi));

  // The companion formula: good_i pins y^i to layer-λ(i) assignments and
  // the truth check asks for the right kind of preimage of y^n.  Connected
  // graphs advance in lockstep, so short chains into a fixed point plus the
  // sibling condition suffice.  Components of a disconnected graph can idle
  // on a fixed point while others still descend, which poisons the sibling
  // counts; the general variant therefore forces a synchronized exit
  // instead: below every descent #pre = 1 pins the all-tag-1 gate
  // configuration (idling components would contribute a factor of 3, closed
  // gates a factor of 0), and above it layer types fall by one per step, so
  // each y^i is uniformly typed on any graph.  #pre = 2 one step after y^i
  // counts free control bits and keeps exactly one vertex chosen per
  // first-order block.
  int n = static_cast<int>(blocks.size());
  std::vector<FoFormula> seq(n);
  for (int i = 1; i <= n; ++i) {
    std::string yi = "y" + std::to_string(i);
    bool fo = blocks[i - 1].first_order;
    std::string yp = "y" + std::to_string(i - 1);
    if (!general) {
      if (i == 1) {
        seq[0] = fo ? make_exists(
                          "y0", make_and<FoAtom>({fo_chain("y1", "y0", 2),
                                                  fo_step("y0", "y0"),
                                                  okfov("y1")}))
                    : fo_step("y1", "y1");
      } else {
        seq[i - 1] = fo ? make_and<FoAtom>({fo_chain(yi, yp, 3), okfov(yi)})
                        : fo_step(yi, yp);
      }
      continue;
    }
    std::string ui = "u" + std::to_string(i);
    std::string gi = "g" + std::to_string(i);
    int lp = space.lambda(i - 1);
    if (fo) {
      FoFormula chosen = make_exists(
          ui,
          make_and<FoAtom>({fo_step(yi, ui), fo_npre(ui, FoAtom::CmpEq, 2)}));
      if (i == 1) {
        seq[0] = make_exists(
            ui,
            make_and<FoAtom>(
                {fo_step(yi, ui), fo_npre(ui, FoAtom::CmpEq, 2),
                 make_exists(
                     gi,
                     make_and<FoAtom>(
                         {fo_step(ui, gi), fo_npre(gi, FoAtom::CmpEq, 1),
                          make_exists(
                              "y0", make_and<FoAtom>(
                                        {fo_step(gi, "y0"),
                                         fo_step("y0", "y0")}))}))}));
      } else if (lp >= 2) {
        seq[i - 1] =
            make_and<FoAtom>({fo_chain(yi, yp, 3), std::move(chosen)});
      } else {
        seq[i - 1] = make_and<FoAtom>(
            {fo_chain(yi, yp, 4), std::move(chosen),
             make_exists(gi,
                         make_and<FoAtom>({fo_chain(yi, gi, 3),
                                           fo_npre(gi, FoAtom::CmpEq, 1)}))});
      }
    } else {
      if (i == 1) {
        seq[0] = fo_step(yi, yi);
      } else if (lp >= 2) {
        seq[i - 1] = fo_step(yi, yp);
      } else {
        seq[i - 1] = make_and<FoAtom>(
            {fo_chain(yi, yp, 2),
             make_exists(gi,
                         make_and<FoAtom>({fo_step(yi, gi),
                                           fo_npre(gi, FoAtom::CmpEq, 1)}))});
      }
    }
  }
  std::vector<FoFormula> good(n);
  std::vector<FoFormula> run;
  for (int i = 0; i < n; ++i) {
    run.push_back(seq[i]);
    good[i] = make_and(std::vector<FoFormula>(run));
  }

  std::string yn = "y" + std::to_string(n);
  FoFormula truth;
  if (!general) {
    truth = make_exists("z", fo_step("z", yn));
  } else {
    const auto& primes = space.primes();
    int pd = primes.empty() ? 0 : primes.back();
    std::vector<FoFormula> alts;
    for (int j = 1; j <= d; ++j) {
      std::string tj = "t" + std::to_string(j);
      std::vector<FoFormula> counts;
      counts.push_back(fo_npre("q", FoAtom::CmpGt, pd));
      for (long long pw = 1; pw <= pd; pw *= primes[j - 1])
        counts.push_back(fo_npre("q", FoAtom::CmpEq, static_cast<int>(pw)));
      auto guard = make_forall(
          "q", make_implies(fo_step("q", tj), make_or(std::move(counts))));
      alts.push_back(make_exists(
          tj, make_and<FoAtom>({fo_step(tj, yn), std::move(guard)})));
    }
    truth = make_or(std::move(alts));
  }

  FoFormula phi = truth;
  for (int i = n; i >= 1; --i) {
    std::string yi = "y" + std::to_string(i);
    phi = blocks[i - 1].quant == Op::Exists
              ? make_exists(yi, make_and<FoAtom>({good[i - 1], phi}))
              : make_forall(yi, make_implies(good[i - 1], phi));
  }

  return {std::move(phi), std::move(rule), std::move(space), std::move(pren),
          std::move(good), std::move(truth)};
}

}  // namespace

MsoFormula foca_to_mso(const FoFormula& phi, const RulePtr& f,
                       const std::vector<std::string>& sigma,
                       const std::vector<std::string>& delta,
                       uint64_t multiset_budget) {
  if (!f) throw ValidationError("foca-to-mso needs a rule");
  auto resolve = [&](const std::vector<std::string>& given,
                     const std::vector<std::string>& pinned,
                     const char* which) {
    if (!given.empty()) {
      if (!pinned.empty() && given != pinned)
        throw ValidationError(std::string(which) +
                              " differs from the rule's pinned alphabet");
      return given;
    }
    if (pinned.empty())
      throw ValidationError(std::string("the rule leaves ") + which +
                            " open; pass an explicit alphabet");
    return pinned;
  };
  auto sig = resolve(sigma, f->required_sigma(), "sigma");
  auto del = resolve(delta, f->required_delta(), "delta");
  StepTranslator tr(f, std::move(sig), std::move(del), multiset_budget);
  return tr.run(phi);
}

MsoToFocaResult mso_to_foca_connected(const MsoFormula& psi,
                                      uint64_t state_budget) {
  return translate_common(psi, false, state_budget);
}

MsoToFocaResult mso_to_foca(const MsoFormula& psi, uint64_t state_budget) {
  return translate_common(psi, true, state_budget);
}

RulePtr translated_rule_from_json(const Json& j) {
  std::string variant = j.at("variant").get<std::string>();
  auto psi = parse_mso(j.at("psi").get<std::string>());
  if (variant == "connected") return mso_to_foca_connected(psi).rule;
  if (variant == "general") return mso_to_foca(psi).rule;
  throw ValidationError("unknown translated-rule variant \"" + variant +
                        "\"");
}

}  // namespace gca
