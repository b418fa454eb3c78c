#pragma once

#include <cstdint>
#include <optional>

#include "npalg/algebra.hpp"

namespace npalg {

/// Declaration of a guessed relation: the solver chooses its extension over
/// DOM^arity.
struct GuessDecl {
  std::string name;
  int arity = 1;
};

/// A query: guess declarations, named intermediate expressions evaluated in
/// order, and the FAIL expression. A witness is a solution iff FAIL
/// evaluates to the empty relation.
struct NpAlgQuery {
  std::vector<GuessDecl> guesses;
  std::vector<std::pair<std::string, ExprPtr>> lets;
  ExprPtr fail;

  const GuessDecl* find_guess(const std::string& name) const {
    for (const auto& g : guesses)
      if (g.name == name) return &g;
    return nullptr;
  }
};

/// One concrete extension of every guessed relation.
using Witness = Extensions;

/// True iff FAIL evaluates to the empty relation under the witness.
/// Validates that the witness covers every guess with the right arity and
/// that all constants are drawn from DOM.
bool check(const NpAlgQuery& query, const Database& db, const Witness& w);

/// Evaluates an expression in the query's let environment under a witness.
Relation evaluate_in_query(const NpAlgQuery& query, const ExprPtr& e, const Database& db,
                           const Witness& w);

struct SolveOptions {
  std::uint64_t budget = 1ull << 20;  // candidate witnesses examined
  /// Optional per-guess candidate-tuple universe; defaults to sorted DOM^arity.
  std::map<std::string, std::vector<Tuple>> universes;
  /// Guessed relations held at a fixed extension instead of being enumerated.
  Extensions fixed;
};

struct SolveResult {
  enum class Status { Found, NoSolution, BudgetExhausted };
  Status status = Status::NoSolution;
  std::optional<Witness> witness;
  std::uint64_t examined = 0;

  bool found() const { return status == Status::Found; }
};

/// Exact enumeration over all extensions: per-guess bitmask over the sorted
/// tuple list of its universe, combined odometer-style across guesses (first
/// guess least significant). Deterministic; budget exhaustion is distinct
/// from "no solution".
SolveResult solve_exact(const NpAlgQuery& query, const Database& db, const SolveOptions& opts = {});

/// FOUND = DOM - pi_$1(DOM x FAIL); nonempty iff FAIL empty, when DOM is not.
ExprPtr found_expr(const NpAlgQuery& query);

/// 2^(|DOM|^arity), the number of candidate extensions for one guess.
std::uint64_t count_extensions(const GuessDecl& decl, const Database& db);

/// Sorted tuple list of DOM^arity, the default enumeration universe.
std::vector<Tuple> guess_universe(const Database& db, int arity);

}  // namespace npalg
