#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gca {

enum class Op { Atom, Not, And, Or, Forall, Exists };

/// Shared immutable formula node.  And/Or are n-ary (an empty And is the
/// constant true, an empty Or the constant false); subtrees may be shared,
/// and evaluators memoize by node identity, so building DAGs is encouraged.
template <typename A>
struct Node {
  Op op = Op::Atom;
  A atom{};                                       // op == Atom
  std::string var;                                // quantifiers
  std::vector<std::shared_ptr<const Node>> kids;  // Not/quantifier: 1 kid
};

template <typename A>
using Formula = std::shared_ptr<const Node<A>>;

template <typename A>
Formula<A> make_atom(A a) {
  auto n = std::make_shared<Node<A>>();
  n->op = Op::Atom;
  n->atom = std::move(a);
  return n;
}

template <typename A>
Formula<A> make_not(Formula<A> f) {
  auto n = std::make_shared<Node<A>>();
  n->op = Op::Not;
  n->kids.push_back(std::move(f));
  return n;
}

// Singleton conjunctions/disjunctions collapse to their only member so a
// formula and its printed form always rebuild the same tree.
template <typename A>
Formula<A> make_and(std::vector<Formula<A>> kids) {
  if (kids.size() == 1) return std::move(kids[0]);
  auto n = std::make_shared<Node<A>>();
  n->op = Op::And;
  n->kids = std::move(kids);
  return n;
}

template <typename A>
Formula<A> make_or(std::vector<Formula<A>> kids) {
  if (kids.size() == 1) return std::move(kids[0]);
  auto n = std::make_shared<Node<A>>();
  n->op = Op::Or;
  n->kids = std::move(kids);
  return n;
}

template <typename A>
Formula<A> make_quant(Op op, std::string var, Formula<A> body) {
  auto n = std::make_shared<Node<A>>();
  n->op = op;
  n->var = std::move(var);
  n->kids.push_back(std::move(body));
  return n;
}

template <typename A>
Formula<A> make_forall(std::string var, Formula<A> body) {
  return make_quant(Op::Forall, std::move(var), std::move(body));
}

template <typename A>
Formula<A> make_exists(std::string var, Formula<A> body) {
  return make_quant(Op::Exists, std::move(var), std::move(body));
}

template <typename A>
Formula<A> make_implies(Formula<A> a, Formula<A> b) {
  return make_or<A>({make_not(std::move(a)), std::move(b)});
}

template <typename A>
Formula<A> make_true() {
  return make_and<A>({});
}

template <typename A>
Formula<A> make_false() {
  return make_or<A>({});
}

/// Second-order variables are spelled with an uppercase first letter.
inline bool is_set_var(const std::string& name) {
  return !name.empty() && name[0] >= 'A' && name[0] <= 'Z';
}

template <typename A>
void collect_free_vars(const Formula<A>& f, std::vector<std::string>& bound,
                       std::vector<std::string>& out) {
  switch (f->op) {
    case Op::Atom:
      for (const auto& v : f->atom.vars())
        if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
            std::find(out.begin(), out.end(), v) == out.end())
          out.push_back(v);
      break;
    case Op::Forall:
    case Op::Exists:
      bound.push_back(f->var);
      collect_free_vars(f->kids[0], bound, out);
      bound.pop_back();
      break;
    default:
      for (const auto& k : f->kids) collect_free_vars(k, bound, out);
  }
}

/// Free variables in first-occurrence order.
template <typename A>
std::vector<std::string> free_vars(const Formula<A>& f) {
  std::vector<std::string> bound, out;
  collect_free_vars(f, bound, out);
  return out;
}

/// Replaces free occurrences of the mapped variables (capture is the
/// caller's problem; prenex only calls this with globally fresh names).
template <typename A>
Formula<A> substitute_free(const Formula<A>& f,
                           const std::map<std::string, std::string>& sub) {
  if (sub.empty()) return f;
  switch (f->op) {
    case Op::Atom: {
      auto vars = f->atom.vars();
      bool touched = false;
      for (auto& v : vars) {
        auto it = sub.find(v);
        if (it != sub.end()) {
          v = it->second;
          touched = true;
        }
      }
      return touched ? make_atom(f->atom.with_vars(vars)) : f;
    }
    case Op::Forall:
    case Op::Exists: {
      auto inner = sub;
      inner.erase(f->var);
      auto body = substitute_free(f->kids[0], inner);
      if (body == f->kids[0]) return f;
      return make_quant(f->op, f->var, std::move(body));
    }
    default: {
      std::vector<Formula<A>> kids;
      bool touched = false;
      for (const auto& k : f->kids) {
        kids.push_back(substitute_free(k, sub));
        touched |= kids.back() != k;
      }
      if (!touched) return f;
      auto n = std::make_shared<Node<A>>();
      n->op = f->op;
      n->kids = std::move(kids);
      return n;
    }
  }
}

namespace detail {

template <typename A>
Formula<A> rename_bound_rec(const Formula<A>& f, int& counter) {
  switch (f->op) {
    case Op::Atom:
      return f;
    case Op::Forall:
    case Op::Exists: {
      // Body first, so inner binders get smaller numbers; any occurrence of
      // f->var still free in the renamed body belongs to this binder.
      auto body = rename_bound_rec(f->kids[0], counter);
      std::string fresh =
          (is_set_var(f->var) ? "V" : "v") + std::to_string(counter++);
      body = substitute_free(body, {{f->var, fresh}});
      return make_quant(f->op, fresh, std::move(body));
    }
    default: {
      std::vector<Formula<A>> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids)
        kids.push_back(rename_bound_rec(k, counter));
      auto n = std::make_shared<Node<A>>();
      n->op = f->op;
      n->kids = std::move(kids);
      return n;
    }
  }
}

}  // namespace detail

/// Renames every bound variable to v0,v1,... (V0,... for set variables) in
/// leftmost-innermost order; free variables keep their names.
template <typename A>
Formula<A> rename_bound(const Formula<A>& f) {
  int counter = 0;
  return detail::rename_bound_rec(f, counter);
}

/// Prenex normal form with deterministic naming: bound variables are
/// renamed apart first, then quantifiers are pulled to the front (negation
/// flips them, conjunction/disjunction concatenates left to right).
template <typename A>
Formula<A> prenex(const Formula<A>& f) {
  using Q = std::pair<Op, std::string>;
  struct Rec {
    static Formula<A> run(const Formula<A>& g, std::vector<Q>& prefix) {
      switch (g->op) {
        case Op::Atom:
          return g;
        case Op::Not: {
          size_t mark = prefix.size();
          auto m = run(g->kids[0], prefix);
          for (size_t i = mark; i < prefix.size(); ++i)
            prefix[i].first =
                prefix[i].first == Op::Forall ? Op::Exists : Op::Forall;
          return make_not(std::move(m));
        }
        case Op::Forall:
        case Op::Exists: {
          prefix.emplace_back(g->op, g->var);
          return run(g->kids[0], prefix);
        }
        default: {
          std::vector<Formula<A>> kids;
          for (const auto& k : g->kids) kids.push_back(run(k, prefix));
          auto n = std::make_shared<Node<A>>();
          n->op = g->op;
          n->kids = std::move(kids);
          return n;
        }
      }
    }
  };
  std::vector<Q> prefix;
  auto matrix = Rec::run(rename_bound(f), prefix);
  Formula<A> out = std::move(matrix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = make_quant(it->first, it->second, std::move(out));
  return out;
}

template <typename A>
struct Literal {
  A atom;
  bool negated = false;
  bool operator==(const Literal&) const = default;
};

namespace detail {

template <typename A>
bool clause_subset(const std::vector<Literal<A>>& a,
                   const std::vector<Literal<A>>& b) {
  for (const auto& l : a)
    if (std::find(b.begin(), b.end(), l) == b.end()) return false;
  return true;
}

template <typename A>
void dnf_rec(const Formula<A>& f, bool neg,
             std::vector<std::vector<Literal<A>>>& out) {
  switch (f->op) {
    case Op::Atom:
      out.push_back({Literal<A>{f->atom, neg}});
      return;
    case Op::Not:
      dnf_rec(f->kids[0], !neg, out);
      return;
    case Op::And:
    case Op::Or: {
      bool conjunctive = (f->op == Op::And) != neg;
      if (!conjunctive) {
        for (const auto& k : f->kids) dnf_rec(k, neg, out);
        return;
      }
      // Distribute: cartesian product of the children's clause lists.
      std::vector<std::vector<Literal<A>>> acc{{}};
      for (const auto& k : f->kids) {
        std::vector<std::vector<Literal<A>>> part;
        dnf_rec(k, neg, part);
        std::vector<std::vector<Literal<A>>> next;
        for (const auto& left : acc)
          for (const auto& right : part) {
            std::vector<Literal<A>> clause = left;
            bool contradictory = false;
            for (const auto& lit : right) {
              Literal<A> flipped{lit.atom, !lit.negated};
              if (std::find(clause.begin(), clause.end(), flipped) !=
                  clause.end()) {
                contradictory = true;
                break;
              }
              if (std::find(clause.begin(), clause.end(), lit) ==
                  clause.end())
                clause.push_back(lit);
            }
            if (!contradictory) next.push_back(std::move(clause));
          }
        acc = std::move(next);
      }
      for (auto& c : acc) out.push_back(std::move(c));
      return;
    }
    default:
      throw std::logic_error("dnf expects a quantifier-free matrix");
  }
}

}  // namespace detail

/// Disjunctive normal form of a quantifier-free matrix: clause list in a
/// deterministic order, contradictory clauses dropped (so a contradiction
/// yields zero clauses), duplicate clauses removed.
template <typename A>
std::vector<std::vector<Literal<A>>> dnf(const Formula<A>& matrix) {
  std::vector<std::vector<Literal<A>>> clauses;
  detail::dnf_rec(matrix, false, clauses);
  std::vector<std::vector<Literal<A>>> unique;
  for (auto& c : clauses) {
    bool dup = false;
    for (const auto& u : unique)
      if (detail::clause_subset(c, u) && detail::clause_subset(u, c)) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(std::move(c));
  }
  return unique;
}

/// One alternation step of a prenex prefix: quantifier and variable order.
struct SignatureLetter {
  Op quant;                 // Forall or Exists
  int order;                // 1 = vertex/configuration, 2 = set
  bool operator==(const SignatureLetter&) const = default;
};

using PrefixSignature = std::vector<SignatureLetter>;

/// Alternation word of the quantifier prefix with consecutive duplicates
/// removed; the formula should be prenex (anything below the first
/// non-quantifier node is ignored).
template <typename A>
PrefixSignature prefix_signature(const Formula<A>& f) {
  PrefixSignature sig;
  for (const Node<A>* n = f.get();
       n->op == Op::Forall || n->op == Op::Exists; n = n->kids[0].get()) {
    SignatureLetter letter{n->op, is_set_var(n->var) ? 2 : 1};
    if (sig.empty() || !(sig.back() == letter)) sig.push_back(letter);
  }
  return sig;
}

inline std::string signature_to_string(const PrefixSignature& sig) {
  std::string out;
  for (const auto& l : sig) {
    out += l.quant == Op::Forall ? "(forall," : "(exists,";
    out += l.order == 2 ? "2)" : "1)";
  }
  return out;
}

}  // namespace gca
