#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/error.hpp"
#include "gca/fo.hpp"
#include "gca/graph_gen.hpp"
#include "gca/local_rule.hpp"
#include "gca/mso.hpp"

using namespace gca;

namespace {

// Reference FO evaluator: plain recursion over all configuration indices,
// no pinning, no memoization.  Counting atoms are computed from the
// predecessor lists directly.
bool naive_fo(const TransitionTable& t, const FoFormula& f,
              std::map<std::string, uint64_t>& env) {
  switch (f->op) {
    case Op::Atom: {
      const FoAtom& a = f->atom;
      switch (a.kind) {
        case FoAtom::Eq:
          return env.at(a.x) == env.at(a.y);
        case FoAtom::Step:
          return t.successor(env.at(a.x)) == env.at(a.y);
        case FoAtom::AsympEq:
          return true;
        case FoAtom::NPre: {
          uint64_t n = t.predecessor_count(env.at(a.x));
          switch (a.cmp) {
            case FoAtom::CmpEq:
              return n == static_cast<uint64_t>(a.n);
            case FoAtom::CmpGt:
              return n > static_cast<uint64_t>(a.n);
            case FoAtom::CmpGe:
              return n >= static_cast<uint64_t>(a.n);
            case FoAtom::CmpMod0:
              return n % a.n == 0;
          }
          return false;
        }
        case FoAtom::Chain: {
          // k distinct steps: x, F(x), ..., F^k(x) = y pairwise distinct
          // except the endpoint equality.
          std::vector<uint64_t> path{env.at(a.x)};
          for (int i = 0; i < a.n; ++i) path.push_back(t.successor(path.back()));
          if (path.back() != env.at(a.y)) return false;
          for (size_t i = 0; i < path.size(); ++i)
            for (size_t j = i + 1; j < path.size(); ++j)
              if (path[i] == path[j]) return false;
          return true;
        }
        case FoAtom::Siblings1: {
          uint64_t img = t.successor(env.at(a.x));
          return t.predecessor_count(img) == 2;
        }
      }
      return false;
    }
    case Op::Not:
      return !naive_fo(t, f->kids[0], env);
    case Op::And:
      for (const auto& k : f->kids)
        if (!naive_fo(t, k, env)) return false;
      return true;
    case Op::Or:
      for (const auto& k : f->kids)
        if (naive_fo(t, k, env)) return true;
      return false;
    case Op::Forall:
    case Op::Exists: {
      for (uint64_t c = 0; c < t.size(); ++c) {
        env[f->var] = c;
        bool v = naive_fo(t, f->kids[0], env);
        env.erase(f->var);
        if (v == (f->op == Op::Exists)) return f->op == Op::Exists;
      }
      return f->op == Op::Forall;
    }
  }
  return false;
}

bool naive_fo(const TransitionTable& t, const FoFormula& f) {
  std::map<std::string, uint64_t> env;
  return naive_fo(t, f, env);
}

}  // namespace

TEST_CASE("mso parsing round trips") {
  for (const char* text : {
           "exists x. x = x",
           "forall x. exists y. edge[u](x,y)",
           "exists X. forall x. (x in X | lab(x,a))",
           "forall X. forall x. forall y. ((x in X & edge[u](x,y)) => y in X)",
           "exists x. (!(x = x) | (true & false))",
       }) {
    MsoFormula f = parse_mso(text);
    MsoFormula again = parse_mso(to_string(f));
    CHECK(to_string(f) == to_string(again));
  }
}

TEST_CASE("fo parsing round trips") {
  for (const char* text : {
           "exists x. x -> x",
           "forall x. exists y. (x -> y & !(x = y))",
           "exists x. npre(x) = 2",
           "exists x. npre(x) >= 1",
           "exists x. npre(x) % 3 = 0",
           "exists x. exists y. x ->{2}!= y",
           "exists x. #siblings(x) = 1",
           "exists x. exists y. x ~inf y",
       }) {
    FoFormula f = parse_fo(text);
    FoFormula again = parse_fo(to_string(f));
    CHECK(to_string(f) == to_string(again));
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_mso("exists x. x -> x"),
                       doctest::Contains("column"), ParseError);
  CHECK_THROWS_AS(parse_mso("exists x."), ParseError);
  CHECK_THROWS_AS(parse_fo("exists x. edge[u](x,x)"), ParseError);
  CHECK_THROWS_AS(parse_fo("exists X. X -> X"), ParseError);
  CHECK_THROWS_AS(parse_fo("exists x. npre(x) < 1"), ParseError);
}

TEST_CASE("mso_check handles the textbook sentences") {
  LabeledGraph k3 = complete_graph(3);
  CHECK(mso_check(k3, parse_mso("forall x. exists y. edge[u](x,y)")));
  CHECK_FALSE(mso_check(k3, parse_mso("exists x. edge[u](x,x)")));

  // 2-colorability as an MSO sentence: C4 yes, C3 no (symmetrized edges).
  const char* bipartite =
      "exists X. forall x. forall y. "
      "((edge[g](x,y) | edge[g](y,x)) => "
      "((x in X & !(y in X)) | (!(x in X) & y in X)))";
  CHECK(mso_check(cycle_graph(4), parse_mso(bipartite)));
  CHECK_FALSE(mso_check(cycle_graph(3), parse_mso(bipartite)));
}

TEST_CASE("mso_check free variables come from the assignment") {
  LabeledGraph g = cycle_graph(3);
  MsoFormula f = parse_mso("edge[g](x,y)");
  MsoAssignment alpha;
  alpha.vertex["x"] = 0;
  alpha.vertex["y"] = 1;
  CHECK(mso_check(g, f, alpha));
  alpha.vertex["y"] = 2;
  CHECK_FALSE(mso_check(g, f, alpha));

  MsoFormula inx = parse_mso("x in X");
  alpha.vertex_set["X"] = 0b101;
  alpha.vertex["x"] = 2;
  CHECK(mso_check(g, inx, alpha));
}

TEST_CASE("mso_check rejects oversized graphs") {
  LabeledGraph g = moore_torus_graph(5, 5);
  CHECK_THROWS_AS(mso_check(g, parse_mso("exists x. x = x"), {}, 16),
                  BudgetError);
}

TEST_CASE("fo_check agrees with the naive evaluator") {
  std::vector<const char*> formulas = {
      "exists x. x -> x",
      "forall x. exists y. y -> x",
      "exists x. forall y. (y -> x => y = x)",
      "exists x. npre(x) = 2",
      "exists x. npre(x) >= 1",
      "forall x. (npre(x) > 0 => npre(x) = 1)",
      "exists x. npre(x) % 2 = 0",
      "exists x. exists y. x ->{2}!= y",
      "exists x. #siblings(x) = 1",
      "exists x. exists y. (x ~inf y & !(x = y))",
  };
  std::vector<std::pair<LabeledGraph, RulePtr>> instances;
  instances.emplace_back(complete_graph(3), coloring_rule(2));
  instances.emplace_back(cycle_graph(4), coloring_rule(2));
  instances.emplace_back(complete_graph(2), connectivity_rule());
  instances.emplace_back(moore_torus_graph(3, 3), life_plain_rule());

  for (const auto& [g, rule] : instances) {
    GlobalMap map(g, rule);
    auto table = TransitionTable::build(map);
    for (const char* text : formulas) {
      FoFormula f = parse_fo(text);
      CHECK_MESSAGE(fo_check(table, f) == naive_fo(table, f), text);
    }
  }
}

TEST_CASE("expand_counting preserves meaning") {
  std::vector<const char*> formulas = {
      "exists x. npre(x) = 2",
      "exists x. npre(x) > 1",
      "exists x. npre(x) >= 3",
      "forall x. (npre(x) > 0 => npre(x) = 1)",
      "exists x. exists y. x ->{2}!= y",
      "exists x. #siblings(x) = 1",
  };
  LabeledGraph g = cycle_graph(4);
  GlobalMap map(g, coloring_rule(2));
  auto table = TransitionTable::build(map);
  for (const char* text : formulas) {
    FoFormula f = parse_fo(text);
    FoFormula expanded = expand_counting(f);
    CHECK_MESSAGE(fo_check(table, f) == fo_check(table, expanded), text);
  }
  CHECK_THROWS_AS(expand_counting(parse_fo("exists x. npre(x) % 2 = 0")),
                  ValidationError);
}

TEST_CASE("prenex preserves mso semantics") {
  std::vector<const char*> sentences = {
      "exists x. !(forall y. edge[u](x,y))",
      "!(forall X. exists x. x in X)",
      "(exists x. lab(x,o)) & (forall y. exists z. (y = z | edge[u](y,z)))",
      "forall x. (edge[u](x,x) => exists y. !(y = x))",
  };
  auto graphs = enumerate_graphs(3, 1, 1);
  for (const char* text : sentences) {
    MsoFormula psi = parse_mso(text);
    MsoFormula pn = prenex(psi);
    // The prefix really is prenex: no quantifier below the first matrix node.
    const Node<MsoAtom>* n = pn.get();
    while (n->op == Op::Forall || n->op == Op::Exists) n = n->kids[0].get();
    struct NoQuant {
      static void check(const Node<MsoAtom>* m) {
        CHECK(m->op != Op::Forall);
        CHECK(m->op != Op::Exists);
        for (const auto& k : m->kids) check(k.get());
      }
    };
    NoQuant::check(n);
    for (const auto& g : graphs)
      CHECK_MESSAGE(mso_check(g, psi) == mso_check(g, pn), text);
  }
}

TEST_CASE("dnf clauses cover the matrix exactly") {
  MsoFormula m =
      parse_mso("(lab(x,o) | !(x = y)) & (edge[u](x,y) | lab(y,o))");
  auto clauses = dnf(m);
  CHECK(clauses.size() == 4);

  // A contradictory matrix has no clauses.
  MsoFormula contra = parse_mso("lab(x,o) & !lab(x,o)");
  CHECK(dnf(contra).empty());

  // Semantics check against mso_check on every assignment of a 2-cycle.
  LabeledGraph g = cycle_graph(2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      MsoAssignment alpha;
      alpha.vertex["x"] = x;
      alpha.vertex["y"] = y;
      bool direct = mso_check(g, m, alpha);
      bool via_clauses = false;
      for (const auto& clause : clauses) {
        bool all = true;
        for (const auto& lit : clause) {
          bool v = mso_check(g, make_atom(lit.atom), alpha);
          all &= lit.negated ? !v : v;
        }
        via_clauses |= all;
      }
      CHECK(direct == via_clauses);
    }
}

TEST_CASE("prefix signatures merge equal letters") {
  MsoFormula psi = parse_mso(
      "exists X. exists Y. forall x. forall y. exists Z. x = y");
  PrefixSignature sig = prefix_signature(prenex(psi));
  REQUIRE(sig.size() == 3);
  CHECK(sig[0].quant == Op::Exists);
  CHECK(sig[0].order == 2);
  CHECK(sig[1].quant == Op::Forall);
  CHECK(sig[1].order == 1);
  CHECK(sig[2].quant == Op::Exists);
  CHECK(sig[2].order == 2);
  CHECK(signature_to_string(sig) == "(exists,2)(forall,1)(exists,2)");
}

TEST_CASE("implication desugars to negation and disjunction") {
  MsoFormula f = parse_mso("lab(x,o) => lab(y,o)");
  CHECK(f->op == Op::Or);
  REQUIRE(f->kids.size() == 2);
  CHECK(f->kids[0]->op == Op::Not);
}
