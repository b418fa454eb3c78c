#pragma once

#include "npalg/consql_solve.hpp"

namespace npalg::localsearch {

using consql::SearchProblem;
using consql::SearchState;

/// Lexicographic state cost: feasibility first, then the objective (when the
/// problem has one).
struct Cost {
  std::int64_t violations = 0;
  std::optional<std::int64_t> objective;
};

/// Strict "a is better than b" under the given objective direction.
bool better_cost(const Cost& a, const Cost& b, bool minimize);

/// Full recomputation: violations summed over all checks, objective when
/// present.
Cost cost(const SearchProblem& problem, const SearchState& state);

/// One elementary state change. Meaning depends on the component's shape:
/// subset/partition/function: set comp[pos] = value (subset flips, so value
/// is ignored; partial functions use 0 for "unassigned"); permutation: swap
/// positions pos and value.
struct Move {
  std::size_t component = 0;
  std::size_t pos = 0;
  int value = 0;
};

/// All shape-preserving elementary moves, in a fixed deterministic order.
std::vector<Move> neighborhood(const SearchProblem& problem, const SearchState& state);

void apply_move(const SearchProblem& problem, SearchState& state, const Move& m);

/// Uniformly random shape-valid state; deterministic in the seed.
SearchState initial_state(const SearchProblem& problem, std::uint64_t seed);

enum class Strategy { Hill, Tabu };

struct SolverParams {
  std::uint64_t seed = 0;
  int max_iters = 10000;
  int restarts = 20;
  int tenure = 10;
  int threads = 1;
};

struct SearchResult {
  SearchState best;
  Cost best_cost;
  std::uint64_t iterations = 0;
  /// Accepted-state cost sequence per restart, for inspection and testing.
  std::vector<std::vector<Cost>> traces;
};

/// Steepest descent with deterministic tie-breaks; stops at a local optimum
/// or max_iters; independent restarts; returns the overall best.
SearchResult hill_climb(const SearchProblem& problem, const SolverParams& params);

/// Best-admissible-neighbor search: the touched (component, position)
/// attributes of an applied move are tabu for `tenure` iterations;
/// aspiration admits tabu moves that beat the global best.
SearchResult tabu_search(const SearchProblem& problem, const SolverParams& params);

/// Runs the strategies in order (at least two), seeding each with its
/// predecessor's best state; returns the overall best.
SearchResult tandem(const SearchProblem& problem, const SolverParams& params,
                    const std::vector<Strategy>& strategies);

}  // namespace npalg::localsearch
