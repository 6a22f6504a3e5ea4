#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gca/config_space.hpp"
#include "gca/formula.hpp"

namespace gca {

/// FO atoms over CA orbits.  All variables range over configurations.
struct FoAtom {
  enum Kind {
    Eq,         // x = y
    Step,       // x -> y            (y is the successor of x)
    AsympEq,    // x ~inf y          (constant true on finite graphs)
    NPre,       // npre(x) CMP n     (preimage counting)
    Chain,      // x ->{k}!= y       (k-step chain through distinct configs)
    Siblings1,  // #siblings(x) = 1  (exactly one other config shares F(x))
  } kind = Eq;
  std::string x, y;

  enum Cmp { CmpEq, CmpGt, CmpGe, CmpMod0 } cmp = CmpEq;  // NPre only
  int n = 0;  // NPre comparison value / modulus; Chain length k

  std::vector<std::string> vars() const;
  FoAtom with_vars(const std::vector<std::string>& vs) const;
  bool operator==(const FoAtom&) const = default;
};

using FoFormula = Formula<FoAtom>;

FoFormula fo_eq(std::string x, std::string y);
FoFormula fo_step(std::string x, std::string y);
FoFormula fo_asymp(std::string x, std::string y);
FoFormula fo_npre(std::string x, FoAtom::Cmp cmp, int n);
FoFormula fo_chain(std::string x, std::string y, int k);
FoFormula fo_siblings1(std::string x);

/// Grammar: quantifiers over lowercase configuration variables; atoms
/// `x = y`, `x -> y`, `x ->{k}!= y`, `x ~inf y`, `npre(x) = n` (also `>`,
/// `>=`, and `npre(x) % p = 0`), `#siblings(x) = 1`; connectives as in the
/// MSO grammar.
FoFormula parse_fo(const std::string& text);
std::string to_string(const FoFormula& f);

struct FoAssignment {
  std::map<std::string, uint64_t> config;  // variable -> configuration index
};

/// Model checking over the materialized global map: quantifiers scan all
/// |S|^|V| configuration indices.  Atoms read the successor/predecessor
/// arrays; ~inf is constant true (difference sets are finite here).
/// Memoizes per (node, free-variable values) and, when a quantifier body
/// syntactically forces its variable through =, -> or ->{k}!= against an
/// already-fixed variable, only the forced candidates are scanned.
bool fo_check(const TransitionTable& table, const FoFormula& f,
              const FoAssignment& beta = {});

/// Replaces every counting construct (npre comparisons, ->{k}!=, #siblings)
/// by its definitional expansion over {=, ->} with fresh bound variables.
/// `npre(x) % p = 0` has no finite expansion and is rejected.
FoFormula expand_counting(const FoFormula& f);

}  // namespace gca
