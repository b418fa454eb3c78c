#pragma once

#include "npalg/guess.hpp"

namespace npalg {

/// Argument of an atom: a variable name or a constant.
struct FoTerm {
  bool is_var = false;
  std::string var;
  Constant value = Constant::integer(0);

  static FoTerm variable(std::string v) {
    FoTerm t;
    t.is_var = true;
    t.var = std::move(v);
    return t;
  }
  static FoTerm constant(Constant c) {
    FoTerm t;
    t.value = std::move(c);
    return t;
  }
};

struct FoFormula;
using FoPtr = std::shared_ptr<const FoFormula>;

/// Quantifier-free first-order formula over a relational vocabulary.
struct FoFormula {
  enum class Kind { Atom, Equality, And, Or, Not };
  Kind kind = Kind::Atom;
  std::string predicate;     // Atom
  std::vector<FoTerm> args;  // Atom; exactly 2 for Equality
  FoPtr a, b;                // And/Or children; Not child in a
};

namespace fo {
FoPtr atom(std::string predicate, std::vector<FoTerm> args);
FoPtr equals(FoTerm lhs, FoTerm rhs);
FoPtr conj(FoPtr a, FoPtr b);
FoPtr disj(FoPtr a, FoPtr b);
FoPtr neg(FoPtr a);
/// Sorted, duplicate-free variable names of the formula.
std::vector<std::string> free_vars(const FoPtr& f);
}  // namespace fo

struct VocabEntry {
  int arity = 0;
  bool guessed = false;  // guessed relation vs. base relation
};
using Vocabulary = std::map<std::string, VocabEntry>;

/// Translates a quantifier-free formula into a relational expression whose
/// schema is exactly the formula's free variables in sorted order: a tuple
/// (in that variable order) belongs to the result iff the corresponding
/// assignment over DOM satisfies the formula. Output contains no projection
/// nodes other than plumbing ones tagged implicit.
ExprPtr translate_fo(const FoPtr& phi, const Vocabulary& vocab);

/// An existential second-order sentence (exists S) (forall X) (exists Y) phi.
struct EsoSentence {
  std::vector<GuessDecl> second_order;
  std::vector<std::string> universal_vars;    // X
  std::vector<std::string> existential_vars;  // Y
  FoPtr matrix;
};

/// Builds the guess-and-check query for an ESO sentence over db's
/// vocabulary: one guess per second-order predicate and
/// FAIL = DOM^|X| - pi_X(PHI) (for |X| = 0: the emptiness-complement test on
/// PHI), so FAIL has an empty evaluation for some witness iff the sentence
/// holds in the database.
NpAlgQuery build_psi(const EsoSentence& s, const Database& db);

/// True iff the expression contains no projection apart from the implicit
/// plumbing projections introduced by the translation.
bool q_free(const ExprPtr& e);

}  // namespace npalg
