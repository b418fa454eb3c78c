#pragma once

#include <map>

#include "npalg/consql.hpp"
#include "npalg/guess.hpp"

namespace npalg::consql {

/// A SQL-side table: named columns and rows with bag (duplicate-keeping)
/// semantics, unlike the set-based algebra Relation.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Constant>> rows;
};

using Env = std::map<std::string, Table>;

Table to_table(const Relation& r);
Relation to_relation(const Table& t);
Env to_env(const Database& db);

/// Evaluates an ordinary query (no guess shapes in FROM) against an
/// environment of named tables. Pure; throws on unknown tables/columns.
Table eval_query(const QueryPtr& q, const Env& env);

/// One state component, derived from one guess-shape FROM item. The domain
/// is the materialized join of the shape's from-clause; `segments` record
/// which columns came from which domain alias so guess bodies can refer to
/// them by their original qualifiers.
struct Component {
  enum class Kind { Subset, TotalFunction, PartialFunction, Permutation, Partition };
  Kind kind = Kind::Subset;
  std::string guess_table;  // owning guessed table
  std::string item_alias;   // alias of the shape item itself, may be empty
  std::string field;        // extra field name (empty for Subset)

  struct Segment {
    std::string alias;  // domain item alias (or table name)
    std::size_t first = 0, count = 0;  // column span in `columns`
  };
  std::vector<Segment> segments;
  std::vector<std::string> columns;           // concatenated domain columns
  std::vector<std::vector<Constant>> rows;    // flattened domain rows
  std::vector<Constant> values;               // function range / block ids / positions
  std::int64_t parts = 0;                     // Partition(n)

  /// Choices per domain row under this shape (absence counts for partial).
  std::size_t choices_per_row() const;
  /// Total number of states of this component alone.
  double space_size() const;
};

/// Per-guess-table recipe: FROM entries are either a component index or a
/// plain base table.
struct GuessPlan {
  std::string name;
  std::vector<std::string> columns;  // output schema
  struct Entry {
    int component = -1;  // >= 0: index into SearchProblem::components
    std::string table, alias;
  };
  std::vector<Entry> from;
  std::vector<SelectItem> select;
  CondPtr where;
};

struct SearchProblem {
  Specification spec;
  Env base;  // instance tables
  std::vector<Component> components;
  std::vector<GuessPlan> plans;

  double space_size() const;
};

/// One concrete point of the search space: per component, one integer per
/// domain row (Subset: 0/1; TotalFunction: value index; PartialFunction: 0 =
/// absent, v = values[v-1]; Partition: block index; Permutation: the image
/// position, always a bijection).
struct SearchState {
  std::vector<std::vector<int>> comp;
  bool operator==(const SearchState& o) const { return comp == o.comp; }
};

struct LowerOptions {
  /// Key column per table for FUNCTION_TO(table) ranges; defaults to the
  /// table's first column.
  std::map<std::string, std::string> keys;
};

SearchProblem lower_spec(const Specification& spec, const Database& db,
                         const LowerOptions& opts = {});

/// Materializes every guessed table for a state; result contains the base
/// tables too, so queries can be evaluated directly against it.
Env materialize(const SearchProblem& problem, const SearchState& state);

struct CheckResult {
  bool holds = false;
  std::int64_t violations = 0;  // 0 iff holds
};

CheckResult eval_condition(const CondPtr& cond, const Env& env);
CheckResult eval_condition(const SearchProblem& problem, const CondPtr& cond,
                           const SearchState& state);

/// Sum of violation counts over all checks; 0 iff the state is a solution.
std::int64_t total_violations(const SearchProblem& problem, const SearchState& state);

/// The objective scalar (spec.objective must be present).
std::int64_t eval_objective(const SearchProblem& problem, const SearchState& state);

/// RETURN tables plus the implicit ANSWER table ({(1)} given a solution
/// state, empty given nullopt).
std::map<std::string, Table> eval_returns(const SearchProblem& problem,
                                          const std::optional<SearchState>& state);

/// State-space iteration for exhaustive search: the first state, and
/// in-place advance in a fixed enumeration order (false when wrapped).
SearchState first_state(const SearchProblem& problem);
bool next_state(const SearchProblem& problem, SearchState& state);

struct ExhaustiveResult {
  bool found = false;
  SearchState best;
  std::optional<std::int64_t> objective;  // of best, when spec has one
  std::uint64_t examined = 0;
};

/// Enumerates every state (guarded by max_states), returning a feasible
/// state with the optimal objective when one exists.
ExhaustiveResult solve_exhaustive(const SearchProblem& problem,
                                  std::uint64_t max_states = 1u << 20);

/// Bridge for decision-form specifications (no objective; Subset and
/// FUNCTION_TO(table) shapes over single-table domains; checks are
/// EXISTS/NOT EXISTS of conjunctive conditions). Throws on anything else.
NpAlgQuery lower_to_npalg(const Specification& spec, const Database& db,
                          const LowerOptions& opts = {});

}  // namespace npalg::consql
