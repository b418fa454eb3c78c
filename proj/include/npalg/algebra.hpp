#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "npalg/relation.hpp"

namespace npalg {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

/// One side of a comparison atom: an attribute reference or a constant.
struct PredTerm {
  bool is_attr = false;
  std::string attr;
  Constant value = Constant::integer(0);

  static PredTerm attribute(std::string a) {
    PredTerm t;
    t.is_attr = true;
    t.attr = std::move(a);
    return t;
  }
  static PredTerm constant(Constant c) {
    PredTerm t;
    t.value = std::move(c);
    return t;
  }
};

struct Pred;
using PredPtr = std::shared_ptr<const Pred>;

/// Boolean combination of comparison atoms over attributes and constants.
struct Pred {
  enum class Kind { Cmp, And, Or, Not };
  Kind kind = Kind::Cmp;
  CmpOp op = CmpOp::Eq;
  PredTerm lhs, rhs;
  PredPtr a, b;
};

namespace pred {
PredPtr cmp(PredTerm lhs, CmpOp op, PredTerm rhs);
PredPtr cmp_attrs(const std::string& lhs, CmpOp op, const std::string& rhs);
PredPtr cmp_const(const std::string& lhs, CmpOp op, Constant rhs);
PredPtr conj(PredPtr a, PredPtr b);
PredPtr disj(PredPtr a, PredPtr b);
PredPtr neg(PredPtr a);
/// Conjunction of a non-empty list.
PredPtr all_of(std::vector<PredPtr> ps);
PredPtr any_of(std::vector<PredPtr> ps);
}  // namespace pred

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Relational-algebra AST node. Expressions are immutable and shared.
struct Expr {
  enum class Kind {
    Base,      // named relation from the database (or a let binding)
    Guessed,   // named guessed relation from the extension
    DomPower,  // k-fold cartesian power of DOM
    Select,
    Project,
    Product,
    Join,
    Union,
    Difference,
    SymDiff,
    Divide,
    Rename,
    Let,
  };

  Kind kind;
  std::string name;              // Base/Guessed/Let binding name
  int power = 0;                 // DomPower
  PredPtr predicate;             // Select/Join
  std::vector<std::string> attrs;  // Project: attribute references
  std::vector<std::string> new_names;  // Rename: full replacement schema
  ExprPtr left, right;           // operands; Let: left = bound expr, right = body
  bool implicit_proj = false;    // Project created by schema plumbing, not quantification
};

namespace expr {
ExprPtr base(std::string name);
ExprPtr guessed(std::string name);
ExprPtr dom_power(int k);
/// DOM itself (dom_power(1)).
ExprPtr dom();
ExprPtr select(PredPtr p, ExprPtr e);
ExprPtr project(std::vector<std::string> attrs, ExprPtr e, bool implicit = false);
ExprPtr product(ExprPtr l, ExprPtr r);
ExprPtr join(PredPtr p, ExprPtr l, ExprPtr r);
ExprPtr set_union(ExprPtr l, ExprPtr r);
ExprPtr difference(ExprPtr l, ExprPtr r);
ExprPtr sym_diff(ExprPtr l, ExprPtr r);
ExprPtr divide(ExprPtr l, ExprPtr r);
ExprPtr rename(std::vector<std::string> new_names, ExprPtr e);
ExprPtr let(std::string name, ExprPtr bound, ExprPtr body);
/// A - (A - B); both operands must have equal arity.
ExprPtr intersect(ExprPtr l, ExprPtr r);
/// Union of a non-empty list.
ExprPtr union_all(std::vector<ExprPtr> es);
}  // namespace expr

/// Extensions for guessed relations (and let bindings during evaluation).
using Extensions = std::map<std::string, Relation>;

/// Evaluates a relational-algebra expression against a database and an
/// extension of the guessed relations. Pure and deterministic.
Relation evaluate(const ExprPtr& e, const Database& db, const Extensions& ext = {});

/// Relation-level operators, exposed for direct use and testing.
Relation divide(const Relation& a, const Relation& b);
Relation sym_diff(const Relation& a, const Relation& b);
Relation dom_power(const Database& db, int k);

}  // namespace npalg
