#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gca/formula.hpp"
#include "gca/labeled_graph.hpp"

namespace gca {

/// MSO atoms over labeled graphs.  Variables with an uppercase first letter
/// range over vertex sets, lowercase over vertices.
struct MsoAtom {
  enum Kind { Lab, Edge, Eq, In } kind = Eq;
  std::string x, y;   // y unused for Lab; y is the set variable for In
  std::string label;  // sigma for Lab, delta for Edge

  std::vector<std::string> vars() const;
  MsoAtom with_vars(const std::vector<std::string>& vs) const;
  bool operator==(const MsoAtom&) const = default;
};

using MsoFormula = Formula<MsoAtom>;

MsoFormula mso_lab(std::string x, std::string sigma);
MsoFormula mso_edge(std::string delta, std::string x, std::string y);
MsoFormula mso_eq(std::string x, std::string y);
MsoFormula mso_in(std::string x, std::string X);

/// Grammar: quantifiers `forall v.` / `exists v.` (case of the first letter
/// selects the sort), atoms `lab(x,SIG)`, `edge[DELTA](x,y)`, `x = y`,
/// `x in X`, connectives `!`, `&`, `|`, `=>` (desugared to !|), constants
/// `true`/`false`, parentheses.  Errors carry line and column.
MsoFormula parse_mso(const std::string& text);
std::string to_string(const MsoFormula& f);

struct MsoAssignment {
  std::map<std::string, int> vertex;
  std::map<std::string, uint64_t> vertex_set;  // bitmask over vertex indices
};

inline constexpr int kDefaultMsoVertexBudget = 16;

/// Brute-force model checking: vertex quantifiers scan V, set quantifiers
/// scan all 2^|V| masks; results are memoized per (node, values of its free
/// variables).  Rejects graphs larger than max_vertices.
bool mso_check(const LabeledGraph& g, const MsoFormula& f,
               const MsoAssignment& alpha = {},
               int max_vertices = kDefaultMsoVertexBudget);

}  // namespace gca
