#include "gca/fo.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gca/error.hpp"
#include "parse_util.hpp"

namespace gca {

std::vector<std::string> FoAtom::vars() const {
  if (kind == NPre || kind == Siblings1) return {x};
  return {x, y};
}

FoAtom FoAtom::with_vars(const std::vector<std::string>& vs) const {
  FoAtom a = *this;
  a.x = vs.at(0);
  if (kind != NPre && kind != Siblings1) a.y = vs.at(1);
  return a;
}

FoFormula fo_eq(std::string x, std::string y) {
  FoAtom a;
  a.kind = FoAtom::Eq;
  a.x = std::move(x);
  a.y = std::move(y);
  return make_atom(std::move(a));
}

FoFormula fo_step(std::string x, std::string y) {
  FoAtom a;
  a.kind = FoAtom::Step;
  a.x = std::move(x);
  a.y = std::move(y);
  return make_atom(std::move(a));
}

FoFormula fo_asymp(std::string x, std::string y) {
  FoAtom a;
  a.kind = FoAtom::AsympEq;
  a.x = std::move(x);
  a.y = std::move(y);
  return make_atom(std::move(a));
}

FoFormula fo_npre(std::string x, FoAtom::Cmp cmp, int n) {
  if (n < 0) throw ValidationError("npre comparisons need n >= 0");
  if (cmp == FoAtom::CmpMod0 && n < 1)
    throw ValidationError("npre modulus must be positive");
  FoAtom a;
  a.kind = FoAtom::NPre;
  a.x = std::move(x);
  a.cmp = cmp;
  a.n = n;
  return make_atom(std::move(a));
}

FoFormula fo_chain(std::string x, std::string y, int k) {
  if (k < 0) throw ValidationError("chain length must be >= 0");
  FoAtom a;
  a.kind = FoAtom::Chain;
  a.x = std::move(x);
  a.y = std::move(y);
  a.n = k;
  return make_atom(std::move(a));
}

FoFormula fo_siblings1(std::string x) {
  FoAtom a;
  a.kind = FoAtom::Siblings1;
  a.x = std::move(x);
  return make_atom(std::move(a));
}

namespace {

using parse::Token;

struct FoParser : parse::ParserBase<FoParser, FoAtom> {
  using ParserBase::ParserBase;

  void check_var(const Token& t) {
    if (is_set_var(t.text))
      throw ParseError(t.line, t.col,
                       "\"" + t.text +
                       "\" is uppercase; configuration variables are "
                       "lowercase");
  }

  int expect_number() {
    const Token& t = lex.peek();
    if (t.type != Token::Number) parse::fail(t, "expected a number");
    return std::stoi(lex.next().text);
  }

  FoFormula parse_atom() {
    const Token& t = lex.peek();
    if (t.type == Token::Ident && t.text == "npre") {
      lex.next();
      expect_sym("(");
      std::string x = expect_var();
      expect_sym(")");
      if (lex.accept_sym(">=")) return fo_npre(x, FoAtom::CmpGe,
                                               expect_number());
      if (lex.accept_sym(">")) return fo_npre(x, FoAtom::CmpGt,
                                              expect_number());
      if (lex.accept_sym("=")) return fo_npre(x, FoAtom::CmpEq,
                                              expect_number());
      if (lex.accept_sym("%")) {
        const Token& tp = lex.peek();
        int p = expect_number();
        if (p < 1)
          throw ParseError(tp.line, tp.col, "modulus must be positive");
        expect_sym("=");
        const Token& tz = lex.peek();
        if (expect_number() != 0)
          throw ParseError(tz.line, tz.col,
                           "only \"npre(x) % p = 0\" is supported");
        return fo_npre(x, FoAtom::CmpMod0, p);
      }
      parse::fail(lex.peek(), "expected =, >, >= or % after npre(..)");
    }
    if (t.type == Token::Sym && t.text == "#siblings") {
      lex.next();
      expect_sym("(");
      std::string x = expect_var();
      expect_sym(")");
      expect_sym("=");
      const Token& tn = lex.peek();
      if (expect_number() != 1)
        throw ParseError(tn.line, tn.col,
                         "only \"#siblings(x) = 1\" is supported");
      return fo_siblings1(std::move(x));
    }
    std::string x = expect_var();
    if (lex.accept_sym("=")) return fo_eq(std::move(x), expect_var());
    if (lex.accept_sym("~inf")) return fo_asymp(std::move(x), expect_var());
    if (lex.accept_sym("->")) {
      if (lex.accept_sym("{")) {
        int k = expect_number();
        expect_sym("}");
        expect_sym("!=");
        return fo_chain(std::move(x), expect_var(), k);
      }
      return fo_step(std::move(x), expect_var());
    }
    parse::fail(lex.peek(), "expected =, ->, ->{k}!= or ~inf after a "
                            "variable");
  }
};

std::string atom_text(const FoAtom& a) {
  switch (a.kind) {
    case FoAtom::Eq:
      return a.x + " = " + a.y;
    case FoAtom::Step:
      return a.x + " -> " + a.y;
    case FoAtom::AsympEq:
      return a.x + " ~inf " + a.y;
    case FoAtom::NPre: {
      std::string head = "npre(" + a.x + ")";
      switch (a.cmp) {
        case FoAtom::CmpEq:
          return head + " = " + std::to_string(a.n);
        case FoAtom::CmpGt:
          return head + " > " + std::to_string(a.n);
        case FoAtom::CmpGe:
          return head + " >= " + std::to_string(a.n);
        case FoAtom::CmpMod0:
          return head + " % " + std::to_string(a.n) + " = 0";
      }
      return head;
    }
    case FoAtom::Chain:
      return a.x + " ->{" + std::to_string(a.n) + "}!= " + a.y;
    case FoAtom::Siblings1:
      return "#siblings(" + a.x + ") = 1";
  }
  return "";
}

/// Atoms of the body that are forced true whenever the body is satisfied
/// (sat=true) or falsified (sat=false); used to restrict quantifier scans.
void collect_pins(const FoFormula& f, bool sat,
                  std::vector<const FoAtom*>& out) {
  switch (f->op) {
    case Op::Atom:
      if (sat) out.push_back(&f->atom);
      break;
    case Op::Not:
      collect_pins(f->kids[0], !sat, out);
      break;
    case Op::And:
      if (sat)
        for (const auto& k : f->kids) collect_pins(k, true, out);
      break;
    case Op::Or:
      if (!sat)
        for (const auto& k : f->kids) collect_pins(k, false, out);
      break;
    default:
      break;  // quantifiers: stop
  }
}

class FoEval {
public:
  explicit FoEval(const TransitionTable& t) : t_(t), n_(t.size()) {}

  bool eval(const FoFormula& f) {
    if (f->op == Op::Atom) return atom(f->atom);

    NodeInfo& info = node_info(f);
    uint64_t flat_key = 0;
    std::vector<uint64_t> key;
    if (info.flat) {
      for (size_t i = 0; i < info.fv.size(); ++i)
        flat_key += value_of(info.fv[i]) * info.stride[i];
      signed char c = info.flat_memo[flat_key];
      if (c >= 0) return c != 0;
    } else {
      key.reserve(info.fv.size());
      for (const auto& v : info.fv) key.push_back(value_of(v));
      auto it = info.memo.find(key);
      if (it != info.memo.end()) return it->second;
    }

    bool result = true;
    switch (f->op) {
      case Op::Not:
        result = !eval(f->kids[0]);
        break;
      case Op::And:
        for (const auto& k : f->kids)
          if (!eval(k)) {
            result = false;
            break;
          }
        break;
      case Op::Or:
        result = false;
        for (const auto& k : f->kids)
          if (eval(k)) {
            result = true;
            break;
          }
        break;
      case Op::Forall:
      case Op::Exists:
        result = quantifier(f);
        break;
      case Op::Atom:
        break;
    }

    if (info.flat)
      info.flat_memo[flat_key] = result ? 1 : 0;
    else
      info.memo.emplace(std::move(key), result);
    return result;
  }

  std::map<std::string, uint64_t> env_;

private:
  struct NodeInfo {
    std::vector<std::string> fv;
    std::vector<uint64_t> stride;
    bool flat = false;
    std::vector<signed char> flat_memo;
    std::map<std::vector<uint64_t>, bool> memo;
  };

  NodeInfo& node_info(const FoFormula& f) {
    auto it = infos_.find(f.get());
    if (it != infos_.end()) return it->second;
    NodeInfo info;
    info.fv = free_vars(f);
    uint64_t space = 1;
    bool fits = n_ > 0;
    info.stride.resize(info.fv.size());
    for (size_t i = 0; i < info.fv.size(); ++i) {
      info.stride[i] = space;
      space *= n_;
      if (space > (uint64_t{1} << 22)) {
        fits = false;
        break;
      }
    }
    info.flat = fits;
    if (fits) info.flat_memo.assign(space, -1);
    return infos_.emplace(f.get(), std::move(info)).first->second;
  }

  uint64_t value_of(const std::string& var) {
    auto it = env_.find(var);
    if (it == env_.end())
      throw ValidationError("variable \"" + var + "\" is not assigned");
    return it->second;
  }

  uint64_t step_k(uint64_t c, int k) {
    for (int i = 0; i < k; ++i) c = t_.successor(c);
    return c;
  }

  /// k-step predecessors of t; levels of a deterministic map are disjoint,
  /// so no deduplication is needed.
  std::vector<uint64_t> preds_k(uint64_t t, int k) {
    std::vector<uint64_t> cur{t};
    for (int i = 0; i < k && !cur.empty(); ++i) {
      std::vector<uint64_t> next;
      for (uint64_t c : cur) {
        auto sp = t_.predecessors(c);
        next.insert(next.end(), sp.begin(), sp.end());
      }
      cur = std::move(next);
    }
    return cur;
  }

  bool atom(const FoAtom& a) {
    switch (a.kind) {
      case FoAtom::Eq:
        return value_of(a.x) == value_of(a.y);
      case FoAtom::Step:
        return t_.successor(value_of(a.x)) == value_of(a.y);
      case FoAtom::AsympEq:
        value_of(a.x);
        value_of(a.y);
        return true;  // all configurations differ on finitely many vertices
      case FoAtom::NPre: {
        uint64_t cnt = t_.predecessor_count(value_of(a.x));
        switch (a.cmp) {
          case FoAtom::CmpEq:
            return cnt == static_cast<uint64_t>(a.n);
          case FoAtom::CmpGt:
            return cnt > static_cast<uint64_t>(a.n);
          case FoAtom::CmpGe:
            return cnt >= static_cast<uint64_t>(a.n);
          case FoAtom::CmpMod0:
            return cnt % static_cast<uint64_t>(a.n) == 0;
        }
        return false;
      }
      case FoAtom::Chain: {
        uint64_t c = value_of(a.x);
        std::vector<uint64_t> walk{c};
        for (int i = 0; i < a.n; ++i) {
          c = t_.successor(c);
          for (uint64_t prev : walk)
            if (prev == c) return false;
          walk.push_back(c);
        }
        return c == value_of(a.y);
      }
      case FoAtom::Siblings1:
        return t_.predecessor_count(t_.successor(value_of(a.x))) == 2;
    }
    return false;
  }

  /// Candidate values for `var` implied by a pinned-true atom, or nullopt
  /// when the atom does not constrain it.
  std::optional<std::vector<uint64_t>> pin_candidates(const FoAtom& a,
                                                      const std::string& var) {
    auto fixed = [&](const std::string& v) {
      return v != var && env_.find(v) != env_.end();
    };
    switch (a.kind) {
      case FoAtom::Eq:
        if (a.x == var && fixed(a.y))
          return std::vector<uint64_t>{env_[a.y]};
        if (a.y == var && fixed(a.x))
          return std::vector<uint64_t>{env_[a.x]};
        break;
      case FoAtom::Step:
        if (a.y == var && fixed(a.x))
          return std::vector<uint64_t>{t_.successor(env_[a.x])};
        if (a.x == var && fixed(a.y)) {
          auto sp = t_.predecessors(env_[a.y]);
          return std::vector<uint64_t>(sp.begin(), sp.end());
        }
        break;
      case FoAtom::Chain:
        if (a.y == var && fixed(a.x))
          return std::vector<uint64_t>{step_k(env_[a.x], a.n)};
        if (a.x == var && fixed(a.y)) return preds_k(env_[a.y], a.n);
        break;
      default:
        break;
    }
    return std::nullopt;
  }

  bool quantifier(const FoFormula& f) {
    bool forall = f->op == Op::Forall;
    const FoFormula& body = f->kids[0];

    std::vector<const FoAtom*> pinned;
    collect_pins(body, !forall, pinned);
    std::optional<std::vector<uint64_t>> candidates;
    for (const FoAtom* a : pinned) {
      auto c = pin_candidates(*a, f->var);
      if (c && (!candidates || c->size() < candidates->size()))
        candidates = std::move(c);
    }

    auto saved = env_.find(f->var) != env_.end()
                     ? std::optional<uint64_t>(env_[f->var])
                     : std::nullopt;
    bool result = forall;
    auto visit = [&](uint64_t val) {
      env_[f->var] = val;
      return eval(body) != forall;
    };
    if (candidates) {
      for (uint64_t val : *candidates)
        if (visit(val)) {
          result = !forall;
          break;
        }
    } else {
      for (uint64_t val = 0; val < n_; ++val)
        if (visit(val)) {
          result = !forall;
          break;
        }
    }
    if (saved)
      env_[f->var] = *saved;
    else
      env_.erase(f->var);
    return result;
  }

  const TransitionTable& t_;
  uint64_t n_;
  std::map<const Node<FoAtom>*, NodeInfo> infos_;
};

void collect_names(const FoFormula& f, std::set<std::string>& out) {
  if (f->op == Op::Atom) {
    for (const auto& v : f->atom.vars()) out.insert(v);
    return;
  }
  if (f->op == Op::Forall || f->op == Op::Exists) out.insert(f->var);
  for (const auto& k : f->kids) collect_names(k, out);
}

struct Expander {
  std::set<std::string> used;
  int counter = 0;

  std::string fresh(const std::string& base) {
    std::string name = base;
    while (used.count(name)) name = base + std::to_string(++counter);
    used.insert(name);
    return name;
  }

  FoFormula all_distinct(const std::vector<std::string>& vs,
                         std::vector<FoFormula>& into) {
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j)
        into.push_back(make_not(fo_eq(vs[i], vs[j])));
    return make_and(std::move(into));
  }

  FoFormula chain(const FoAtom& a) {
    if (a.n == 0) return fo_eq(a.x, a.y);
    std::vector<std::string> stops{a.x};
    for (int i = 1; i < a.n; ++i) stops.push_back(fresh("z"));
    stops.push_back(a.y);
    std::vector<FoFormula> body;
    for (int i = 0; i < a.n; ++i) body.push_back(fo_step(stops[i],
                                                         stops[i + 1]));
    FoFormula out = all_distinct(stops, body);
    for (int i = a.n - 1; i >= 1; --i)
      out = make_exists(stops[i], std::move(out));
    return out;
  }

  FoFormula siblings1(const FoAtom& a) {
    std::string ys = fresh("ys"), yp = fresh("yp"), yo = fresh("yo");
    FoFormula closed = make_forall(
        yo, make_implies(fo_step(yo, yp),
                         make_or<FoAtom>({fo_eq(yo, a.x), fo_eq(yo, ys)})));
    return make_exists(
        ys,
        make_exists(yp, make_and<FoAtom>({fo_step(ys, yp), fo_step(a.x, yp),
                                          make_not(fo_eq(ys, a.x)),
                                          std::move(closed)})));
  }

  FoFormula npre_at_least(const std::string& x, int n) {
    if (n == 0) return make_true<FoAtom>();
    std::vector<std::string> ps;
    for (int i = 0; i < n; ++i) ps.push_back(fresh("p"));
    std::vector<FoFormula> body;
    for (const auto& p : ps) body.push_back(fo_step(p, x));
    FoFormula out = all_distinct(ps, body);
    for (int i = n - 1; i >= 0; --i) out = make_exists(ps[i],
                                                       std::move(out));
    return out;
  }

  FoFormula npre(const FoAtom& a) {
    switch (a.cmp) {
      case FoAtom::CmpGe:
        return npre_at_least(a.x, a.n);
      case FoAtom::CmpGt:
        return npre_at_least(a.x, a.n + 1);
      case FoAtom::CmpEq:
        return make_and<FoAtom>({npre_at_least(a.x, a.n),
                                 make_not(npre_at_least(a.x, a.n + 1))});
      case FoAtom::CmpMod0:
        throw ValidationError(
            "npre(x) % p = 0 has no finite expansion over = and ->");
    }
    return make_atom(a);
  }

  FoFormula rec(const FoFormula& f) {
    switch (f->op) {
      case Op::Atom:
        switch (f->atom.kind) {
          case FoAtom::Chain:
            return chain(f->atom);
          case FoAtom::Siblings1:
            return siblings1(f->atom);
          case FoAtom::NPre:
            return npre(f->atom);
          default:
            return f;
        }
      case Op::Not:
        return make_not(rec(f->kids[0]));
      case Op::Forall:
      case Op::Exists:
        return make_quant(f->op, f->var, rec(f->kids[0]));
      case Op::And:
      case Op::Or: {
        std::vector<FoFormula> kids;
        kids.reserve(f->kids.size());
        for (const auto& k : f->kids) kids.push_back(rec(k));
        auto n = std::make_shared<Node<FoAtom>>();
        n->op = f->op;
        n->kids = std::move(kids);
        return n;
      }
    }
    return f;
  }
};

}  // namespace

FoFormula parse_fo(const std::string& text) {
  FoParser p(text);
  return p.run();
}

std::string to_string(const FoFormula& f) {
  std::string out;
  parse::print_rec(out, f, atom_text);
  return out;
}

bool fo_check(const TransitionTable& table, const FoFormula& f,
              const FoAssignment& beta) {
  FoEval eval(table);
  for (const auto& [var, c] : beta.config) {
    if (c >= table.size())
      throw ValidationError("configuration assignment for \"" + var +
                            "\" is out of range");
    eval.env_[var] = c;
  }
  for (const auto& var : free_vars(f))
    if (eval.env_.find(var) == eval.env_.end())
      throw ValidationError("free variable \"" + var + "\" is not assigned");
  return eval.eval(f);
}

FoFormula expand_counting(const FoFormula& f) {
  Expander e;
  collect_names(f, e.used);
  return e.rec(f);
}

}  // namespace gca
