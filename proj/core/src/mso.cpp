#include "gca/mso.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gca/error.hpp"
#include "parse_util.hpp"

namespace gca {

std::vector<std::string> MsoAtom::vars() const {
  if (kind == Lab) return {x};
  return {x, y};
}

MsoAtom MsoAtom::with_vars(const std::vector<std::string>& vs) const {
  MsoAtom a = *this;
  a.x = vs.at(0);
  if (kind != Lab) a.y = vs.at(1);
  return a;
}

MsoFormula mso_lab(std::string x, std::string sigma) {
  MsoAtom a;
  a.kind = MsoAtom::Lab;
  a.x = std::move(x);
  a.label = std::move(sigma);
  return make_atom(std::move(a));
}

MsoFormula mso_edge(std::string delta, std::string x, std::string y) {
  MsoAtom a;
  a.kind = MsoAtom::Edge;
  a.x = std::move(x);
  a.y = std::move(y);
  a.label = std::move(delta);
  return make_atom(std::move(a));
}

MsoFormula mso_eq(std::string x, std::string y) {
  MsoAtom a;
  a.kind = MsoAtom::Eq;
  a.x = std::move(x);
  a.y = std::move(y);
  return make_atom(std::move(a));
}

MsoFormula mso_in(std::string x, std::string X) {
  MsoAtom a;
  a.kind = MsoAtom::In;
  a.x = std::move(x);
  a.y = std::move(X);
  return make_atom(std::move(a));
}

namespace {

using parse::Token;

struct MsoParser : parse::ParserBase<MsoParser, MsoAtom> {
  using ParserBase::ParserBase;

  void check_var(const Token&) {}  // both sorts are legal variables

  std::string expect_vertex_var() {
    const Token& t = lex.peek();
    std::string v = expect_var();
    if (is_set_var(v))
      throw ParseError(t.line, t.col,
                       "\"" + v + "\" is a set variable; a vertex variable "
                       "(lowercase) is required here");
    return v;
  }

  std::string expect_label() {
    const Token& t = lex.peek();
    if (t.type != Token::Ident && t.type != Token::Number)
      parse::fail(t, "expected a label");
    return lex.next().text;
  }

  MsoFormula parse_atom() {
    const Token& t = lex.peek();
    if (t.type == Token::Ident && t.text == "lab") {
      lex.next();
      expect_sym("(");
      std::string x = expect_vertex_var();
      expect_sym(",");
      std::string sigma = expect_label();
      expect_sym(")");
      return mso_lab(std::move(x), std::move(sigma));
    }
    if (t.type == Token::Ident && t.text == "edge") {
      lex.next();
      expect_sym("[");
      std::string delta = expect_label();
      expect_sym("]");
      expect_sym("(");
      std::string x = expect_vertex_var();
      expect_sym(",");
      std::string y = expect_vertex_var();
      expect_sym(")");
      return mso_edge(std::move(delta), std::move(x), std::move(y));
    }
    std::string x = expect_vertex_var();
    if (lex.accept_sym("=")) {
      std::string y = expect_vertex_var();
      return mso_eq(std::move(x), std::move(y));
    }
    const Token& t2 = lex.peek();
    if (t2.type == Token::Ident && t2.text == "in") {
      lex.next();
      const Token& ts = lex.peek();
      std::string X = expect_var();
      if (!is_set_var(X))
        throw ParseError(ts.line, ts.col,
                         "\"" + X + "\" is a vertex variable; \"in\" needs a "
                         "set variable (uppercase) on the right");
      return mso_in(std::move(x), std::move(X));
    }
    parse::fail(t2, "expected \"=\" or \"in\" after a variable");
  }
};

std::string atom_text(const MsoAtom& a) {
  switch (a.kind) {
    case MsoAtom::Lab:
      return "lab(" + a.x + "," + a.label + ")";
    case MsoAtom::Edge:
      return "edge[" + a.label + "](" + a.x + "," + a.y + ")";
    case MsoAtom::Eq:
      return a.x + " = " + a.y;
    case MsoAtom::In:
      return a.x + " in " + a.y;
  }
  return "";
}

/// Brute-force checker.  Values live in a name-keyed environment (vertex
/// index or set mask depending on the variable's sort); every non-atom node
/// is memoized on the values of its free variables, flat arrays when the key
/// space is small enough, ordered maps otherwise.
class MsoEval {
public:
  explicit MsoEval(const LabeledGraph& g) : g_(g), n_(g.vertex_count()) {}

  bool eval(const MsoFormula& f) {
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
      case Op::Exists: {
        bool forall = f->op == Op::Forall;
        uint64_t domain = is_set_var(f->var) ? (uint64_t{1} << n_)
                                             : static_cast<uint64_t>(n_);
        auto saved = env_.find(f->var) != env_.end()
                         ? std::optional<uint64_t>(env_[f->var])
                         : std::nullopt;
        result = forall;
        for (uint64_t val = 0; val < domain; ++val) {
          env_[f->var] = val;
          if (eval(f->kids[0]) != forall) {
            result = !forall;
            break;
          }
        }
        if (saved)
          env_[f->var] = *saved;
        else
          env_.erase(f->var);
        break;
      }
      case Op::Atom:
        break;  // handled above
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

  NodeInfo& node_info(const MsoFormula& f) {
    auto it = infos_.find(f.get());
    if (it != infos_.end()) return it->second;
    NodeInfo info;
    info.fv = free_vars(f);
    uint64_t space = 1;
    bool fits = n_ > 0;
    info.stride.resize(info.fv.size());
    for (size_t i = 0; i < info.fv.size(); ++i) {
      info.stride[i] = space;
      uint64_t dom = is_set_var(info.fv[i]) ? (uint64_t{1} << n_)
                                            : static_cast<uint64_t>(n_);
      space *= dom;
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

  bool atom(const MsoAtom& a) {
    switch (a.kind) {
      case MsoAtom::Lab: {
        int v = vertex_value(a.x);
        int s = g_.sigma_index(a.label);
        return s >= 0 && g_.label_of(v) == s;
      }
      case MsoAtom::Edge: {
        int u = vertex_value(a.x);
        int v = vertex_value(a.y);
        int d = g_.delta_index(a.label);
        return d >= 0 && g_.has_edge(d, u, v);
      }
      case MsoAtom::Eq:
        return vertex_value(a.x) == vertex_value(a.y);
      case MsoAtom::In: {
        int v = vertex_value(a.x);
        if (!is_set_var(a.y))
          throw ValidationError("\"" + a.y +
                                "\" is used as a set variable but is "
                                "lowercase");
        return (value_of(a.y) >> v) & 1;
      }
    }
    return false;
  }

  int vertex_value(const std::string& var) {
    if (is_set_var(var))
      throw ValidationError("\"" + var +
                            "\" is a set variable but is used as a vertex");
    return static_cast<int>(value_of(var));
  }

  const LabeledGraph& g_;
  int n_;
  std::map<const Node<MsoAtom>*, NodeInfo> infos_;
};

}  // namespace

MsoFormula parse_mso(const std::string& text) {
  MsoParser p(text);
  return p.run();
}

std::string to_string(const MsoFormula& f) {
  std::string out;
  parse::print_rec(out, f, atom_text);
  return out;
}

bool mso_check(const LabeledGraph& g, const MsoFormula& f,
               const MsoAssignment& alpha, int max_vertices) {
  int n = g.vertex_count();
  if (n > max_vertices)
    throw BudgetError("mso check on " + std::to_string(n) +
                      " vertices needs up to 2^" + std::to_string(n) +
                      " set assignments per quantifier; the budget is " +
                      std::to_string(max_vertices) + " vertices");

  MsoEval eval(g);
  for (const auto& [var, v] : alpha.vertex) {
    if (is_set_var(var))
      throw ValidationError("\"" + var +
                            "\" is a set variable; assign it a vertex set");
    if (v < 0 || v >= n)
      throw ValidationError("vertex assignment for \"" + var +
                            "\" is out of range");
    eval.env_[var] = static_cast<uint64_t>(v);
  }
  for (const auto& [var, mask] : alpha.vertex_set) {
    if (!is_set_var(var))
      throw ValidationError("\"" + var +
                            "\" is a vertex variable; assign it a vertex");
    if (n < 64 && (mask >> n) != 0)
      throw ValidationError("set assignment for \"" + var +
                            "\" mentions vertices outside the graph");
    eval.env_[var] = mask;
  }
  for (const auto& var : free_vars(f))
    if (eval.env_.find(var) == eval.env_.end())
      throw ValidationError("free variable \"" + var + "\" is not assigned");
  return eval.eval(f);
}

}  // namespace gca
