#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "npalg/relation.hpp"

namespace npalg::consql {

struct Scalar;
struct Cond;
struct Query;
using ScalarPtr = std::shared_ptr<const Scalar>;
using CondPtr = std::shared_ptr<const Cond>;
using QueryPtr = std::shared_ptr<const Query>;

/// Scalar expression: column references, literals, arithmetic, the two
/// supported aggregates, and scalar subqueries.
struct Scalar {
  enum class Kind { Column, IntLit, TextLit, Add, Sub, Mul, CountStar, Sum, Subquery };
  Kind kind = Kind::IntLit;
  std::string table;   // Column qualifier, may be empty
  std::string column;  // Column
  std::int64_t int_val = 0;
  std::string text_val;
  ScalarPtr a, b;  // binary operands; Sum: a = summed expression
  QueryPtr sub;    // Subquery
};

/// Boolean condition over scalar comparisons and subquery tests.
struct Cond {
  enum class Kind { Cmp, And, Or, Not, Exists, NotExists, In, NotIn };
  enum class Op { Eq, Ne, Lt, Le, Gt, Ge };
  Kind kind = Kind::Cmp;
  Op op = Op::Eq;
  ScalarPtr lhs, rhs;  // Cmp; In/NotIn: lhs only
  CondPtr a, b;
  QueryPtr sub;  // Exists/NotExists/In/NotIn
};

struct SelectItem {
  bool star = false;
  ScalarPtr expr;     // unless star
  std::string alias;  // optional output name
};

/// Range of a FUNCTION_TO: a table's key values or an integer interval.
struct RangeSpec {
  bool is_table = false;
  std::string table;
  std::int64_t min = 0, max = -1;
  // The interval bounds as written, for faithful round-tripping.
  ScalarPtr min_expr, max_expr;
};

struct FromItem {
  enum class Kind { Table, Derived, SubsetOf, FunctionTo, Partition, Permutation };
  Kind kind = Kind::Table;
  std::string table;   // Table
  QueryPtr derived;    // Derived
  std::string alias;   // optional except for Derived
  bool parenthesized = false;  // shape written inside ( ... )

  // Shape payload.
  bool total = true;                 // FunctionTo
  RangeSpec range;                   // FunctionTo
  std::vector<std::string> fields;   // extra field name(s)
  std::int64_t parts = 0;            // Partition(n)
  std::vector<FromItem> domain;      // the shape's own from-clause (plain tables)
};

struct Query {
  std::vector<SelectItem> select;
  std::vector<FromItem> from;
  CondPtr where;        // optional
  QueryPtr union_next;  // optional UNION continuation
};

struct GuessedTableSpec {
  std::string name;
  std::vector<std::string> aliases;  // optional declared column names
  QueryPtr body;                     // SELECT ... FROM shapes ... [WHERE ...]
};

struct Objective {
  bool minimize = true;
  QueryPtr query;  // must yield one row, one numeric column
};

struct Specification {
  std::string name;
  std::vector<GuessedTableSpec> guesses;
  std::optional<Objective> objective;
  std::vector<CondPtr> checks;
  std::vector<std::pair<std::string, QueryPtr>> returns;
};

/// A post-solve statement: SELECT fields FROM problem.return_table [WHERE c].
struct PostSelect {
  std::vector<SelectItem> select;
  std::string problem, table;
  CondPtr where;
};

struct Program {
  std::vector<Specification> specs;
  std::vector<PostSelect> posts;
};

/// Parses exactly one CREATE SPECIFICATION block (comments allowed).
/// Throws Error with line/column on syntax errors.
Specification parse_spec(const std::string& text);

/// Parses a whole file: one or more specifications plus trailing post-solve
/// SELECT statements.
Program parse_program(const std::string& text);

/// Deterministic pretty-printer; its output reparses to an identical tree.
std::string print_spec(const Specification& spec);
std::string print_query(const QueryPtr& q);
std::string print_cond(const CondPtr& c);

}  // namespace npalg::consql
