#pragma once

#include "npalg/guess.hpp"

namespace npalg {

/// Syntactic classification of a query into the polynomial fragments.
struct FragmentClass {
  enum class Tag { Eaa, E1eStarAa, General };
  Tag tag = Tag::General;
  std::string detail;  // the matched structure, or why the query fell through
};

struct TwoSatLit {
  int var = 0;
  bool negated = false;
};

struct TwoSatInstance {
  int num_vars = 0;
  std::vector<std::pair<TwoSatLit, TwoSatLit>> clauses;
};

/// Structural pattern match; conservative (ambiguity means General).
/// Eaa: single guess Q^(s), FAIL = DOM x DOM - pi_{Y1,Y2}(PHI), PHI q-free.
/// E1eStarAa: single unary guess, one binding X = PHI / rho(DOM x DOM) with
/// PHI q-free, FAIL = the emptiness test on X.
FragmentClass classify(const NpAlgQuery& query);

/// Grounds a fragment query over db into a 2SAT instance whose
/// satisfiability is equivalent to "some extension makes FAIL empty".
/// Variables stand for candidate guessed tuples (in sorted-universe order).
/// Throws when the query is not in a fragment or when grounding produces a
/// condition over more than two guessed tuples.
TwoSatInstance to_2sat(const NpAlgQuery& query, const Database& db);

/// Standard implication-graph decision procedure: a satisfying assignment,
/// or absent. Linear in the number of clauses.
std::optional<std::vector<bool>> solve_2sat(const TwoSatInstance& inst);

struct PolyResult {
  bool satisfiable = false;
  std::optional<Witness> witness;
};

/// Polynomial decision for fragment queries via to_2sat + solve_2sat; on
/// success reconstructs a witness (which passes check).
PolyResult solve_poly(const NpAlgQuery& query, const Database& db);

}  // namespace npalg
