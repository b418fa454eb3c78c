#include "npalg/algebra.hpp"

#include <algorithm>
#include <cstdint>

namespace npalg {

namespace pred {

PredPtr cmp(PredTerm lhs, CmpOp op, PredTerm rhs) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::Cmp;
  p->op = op;
  p->lhs = std::move(lhs);
  p->rhs = std::move(rhs);
  return p;
}

PredPtr cmp_attrs(const std::string& lhs, CmpOp op, const std::string& rhs) {
  return cmp(PredTerm::attribute(lhs), op, PredTerm::attribute(rhs));
}

PredPtr cmp_const(const std::string& lhs, CmpOp op, Constant rhs) {
  return cmp(PredTerm::attribute(lhs), op, PredTerm::constant(std::move(rhs)));
}

PredPtr conj(PredPtr a, PredPtr b) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::And;
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

PredPtr disj(PredPtr a, PredPtr b) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::Or;
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

PredPtr neg(PredPtr a) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::Not;
  p->a = std::move(a);
  return p;
}

PredPtr all_of(std::vector<PredPtr> ps) {
  if (ps.empty()) throw Error("all_of: empty predicate list");
  PredPtr r = ps[0];
  for (std::size_t i = 1; i < ps.size(); ++i) r = conj(r, ps[i]);
  return r;
}

PredPtr any_of(std::vector<PredPtr> ps) {
  if (ps.empty()) throw Error("any_of: empty predicate list");
  PredPtr r = ps[0];
  for (std::size_t i = 1; i < ps.size(); ++i) r = disj(r, ps[i]);
  return r;
}

}  // namespace pred

namespace expr {

namespace {
ExprPtr node(Expr e) { return std::make_shared<Expr>(std::move(e)); }
}  // namespace

ExprPtr base(std::string name) {
  Expr e;
  e.kind = Expr::Kind::Base;
  e.name = std::move(name);
  return node(std::move(e));
}

ExprPtr guessed(std::string name) {
  Expr e;
  e.kind = Expr::Kind::Guessed;
  e.name = std::move(name);
  return node(std::move(e));
}

ExprPtr dom_power(int k) {
  if (k < 1) throw Error("dom_power: k must be >= 1");
  Expr e;
  e.kind = Expr::Kind::DomPower;
  e.power = k;
  return node(std::move(e));
}

ExprPtr dom() { return dom_power(1); }

ExprPtr select(PredPtr p, ExprPtr e) {
  Expr n;
  n.kind = Expr::Kind::Select;
  n.predicate = std::move(p);
  n.left = std::move(e);
  return node(std::move(n));
}

ExprPtr project(std::vector<std::string> attrs, ExprPtr e, bool implicit) {
  Expr n;
  n.kind = Expr::Kind::Project;
  n.attrs = std::move(attrs);
  n.left = std::move(e);
  n.implicit_proj = implicit;
  return node(std::move(n));
}

ExprPtr product(ExprPtr l, ExprPtr r) {
  Expr n;
  n.kind = Expr::Kind::Product;
  n.left = std::move(l);
  n.right = std::move(r);
  return node(std::move(n));
}

ExprPtr join(PredPtr p, ExprPtr l, ExprPtr r) {
  Expr n;
  n.kind = Expr::Kind::Join;
  n.predicate = std::move(p);
  n.left = std::move(l);
  n.right = std::move(r);
  return node(std::move(n));
}

ExprPtr set_union(ExprPtr l, ExprPtr r) {
  Expr n;
  n.kind = Expr::Kind::Union;
  n.left = std::move(l);
  n.right = std::move(r);
  return node(std::move(n));
}

ExprPtr difference(ExprPtr l, ExprPtr r) {
  Expr n;
  n.kind = Expr::Kind::Difference;
  n.left = std::move(l);
  n.right = std::move(r);
  return node(std::move(n));
}

ExprPtr sym_diff(ExprPtr l, ExprPtr r) {
  Expr n;
  n.kind = Expr::Kind::SymDiff;
  n.left = std::move(l);
  n.right = std::move(r);
  return node(std::move(n));
}

ExprPtr divide(ExprPtr l, ExprPtr r) {
  Expr n;
  n.kind = Expr::Kind::Divide;
  n.left = std::move(l);
  n.right = std::move(r);
  return node(std::move(n));
}

ExprPtr rename(std::vector<std::string> new_names, ExprPtr e) {
  Expr n;
  n.kind = Expr::Kind::Rename;
  n.new_names = std::move(new_names);
  n.left = std::move(e);
  return node(std::move(n));
}

ExprPtr let(std::string name, ExprPtr bound, ExprPtr body) {
  Expr n;
  n.kind = Expr::Kind::Let;
  n.name = std::move(name);
  n.left = std::move(bound);
  n.right = std::move(body);
  return node(std::move(n));
}

ExprPtr intersect(ExprPtr l, ExprPtr r) { return difference(l, difference(l, std::move(r))); }

ExprPtr union_all(std::vector<ExprPtr> es) {
  if (es.empty()) throw Error("union_all: empty list");
  ExprPtr r = es[0];
  for (std::size_t i = 1; i < es.size(); ++i) r = set_union(r, es[i]);
  return r;
}

}  // namespace expr

namespace {

constexpr std::uint64_t kMaxMaterialized = 1ull << 22;

// A predicate compiled to column indices against a concrete schema.
struct CompiledTerm {
  bool is_attr;
  std::size_t index;
  Constant value = Constant::integer(0);
};

struct CompiledPred {
  Pred::Kind kind;
  CmpOp op = CmpOp::Eq;
  CompiledTerm lhs{false, 0}, rhs{false, 0};
  std::unique_ptr<CompiledPred> a, b;
};

CompiledTerm compile_term(const PredTerm& t, const Relation& rel) {
  CompiledTerm c{t.is_attr, 0, t.value};
  if (t.is_attr) c.index = rel.resolve(t.attr);
  return c;
}

// Join-condition terms resolve side-wise: lhs in the left schema, rhs in the
// right schema (offset by the left arity in the concatenated tuple).
CompiledTerm compile_term_sided(const PredTerm& t, const Relation& side, std::size_t offset) {
  CompiledTerm c{t.is_attr, 0, t.value};
  if (t.is_attr) c.index = side.resolve(t.attr) + offset;
  return c;
}

std::unique_ptr<CompiledPred> compile_pred(const PredPtr& p, const Relation& rel) {
  auto c = std::make_unique<CompiledPred>();
  c->kind = p->kind;
  switch (p->kind) {
    case Pred::Kind::Cmp:
      c->op = p->op;
      c->lhs = compile_term(p->lhs, rel);
      c->rhs = compile_term(p->rhs, rel);
      break;
    case Pred::Kind::Not:
      c->a = compile_pred(p->a, rel);
      break;
    default:
      c->a = compile_pred(p->a, rel);
      c->b = compile_pred(p->b, rel);
      break;
  }
  return c;
}

std::unique_ptr<CompiledPred> compile_join_pred(const PredPtr& p, const Relation& l,
                                                const Relation& r) {
  auto c = std::make_unique<CompiledPred>();
  c->kind = p->kind;
  switch (p->kind) {
    case Pred::Kind::Cmp:
      c->op = p->op;
      c->lhs = compile_term_sided(p->lhs, l, 0);
      c->rhs = compile_term_sided(p->rhs, r, l.arity());
      break;
    case Pred::Kind::Not:
      c->a = compile_join_pred(p->a, l, r);
      break;
    default:
      c->a = compile_join_pred(p->a, l, r);
      c->b = compile_join_pred(p->b, l, r);
      break;
  }
  return c;
}

bool compare(const Constant& a, CmpOp op, const Constant& b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a < b || a == b;
    case CmpOp::Gt: return b < a;
    case CmpOp::Ge: return b < a || a == b;
  }
  throw Error("bad comparison operator");
}

bool eval_pred(const CompiledPred& p, const Tuple& t) {
  switch (p.kind) {
    case Pred::Kind::Cmp: {
      const Constant& a = p.lhs.is_attr ? t[p.lhs.index] : p.lhs.value;
      const Constant& b = p.rhs.is_attr ? t[p.rhs.index] : p.rhs.value;
      return compare(a, p.op, b);
    }
    case Pred::Kind::And: return eval_pred(*p.a, t) && eval_pred(*p.b, t);
    case Pred::Kind::Or: return eval_pred(*p.a, t) || eval_pred(*p.b, t);
    case Pred::Kind::Not: return !eval_pred(*p.a, t);
  }
  throw Error("bad predicate kind");
}

// Alias used to qualify attribute names when the expression is an operand of
// a product or join; defaults to the relation name.
std::string expr_alias(const ExprPtr& e) {
  if (e->kind == Expr::Kind::Base || e->kind == Expr::Kind::Guessed) return e->name;
  return {};
}

std::string qualify(const std::string& alias, const std::string& name) {
  if (alias.empty() || name.find('.') != std::string::npos || name.empty() || name[0] == '$')
    return name;
  return alias + "." + name;
}

std::vector<std::string> qualified_schema(const ExprPtr& e, const Relation& rel) {
  std::string alias = expr_alias(e);
  std::vector<std::string> out;
  out.reserve(rel.arity());
  for (const auto& n : rel.schema()) out.push_back(qualify(alias, n));
  return out;
}

void check_equal_arity(const Relation& a, const Relation& b, const char* what) {
  if (a.arity() != b.arity())
    throw Error(std::string(what) + ": arity mismatch (" + std::to_string(a.arity()) + " vs " +
                std::to_string(b.arity()) + ")");
}

// Streams all tuples of DOM^k, invoking f on each; f returns false to stop.
template <typename F>
void for_each_dom_power(const Relation& dom, int k, F&& f) {
  if (dom.empty()) return;
  std::vector<Constant> domvals;
  for (const auto& t : dom.tuples()) domvals.push_back(t[0]);
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  Tuple cur(static_cast<std::size_t>(k), domvals[0]);
  while (true) {
    for (std::size_t i = 0; i < idx.size(); ++i) cur[i] = domvals[idx[i]];
    if (!f(cur)) return;
    int pos = k - 1;
    while (pos >= 0) {
      if (++idx[static_cast<std::size_t>(pos)] < domvals.size()) break;
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

std::vector<std::string> power_schema(int k) {
  std::vector<std::string> s;
  for (int i = 1; i <= k; ++i) s.push_back("$" + std::to_string(i));
  return s;
}

Relation eval_rec(const ExprPtr& e, const Database& db, const Extensions& ext);

Relation eval_dom_power(const Database& db, int k) {
  double est = 1;
  for (int i = 0; i < k; ++i) est *= static_cast<double>(db.dom().size());
  if (est > static_cast<double>(kMaxMaterialized))
    throw Error("dom_power: materialization too large (|DOM|^" + std::to_string(k) + ")");
  Relation out(power_schema(k));
  for_each_dom_power(db.dom(), k, [&](const Tuple& t) {
    out.insert(t);
    return true;
  });
  return out;
}

Relation eval_rec(const ExprPtr& e, const Database& db, const Extensions& ext) {
  switch (e->kind) {
    case Expr::Kind::Base: {
      auto it = ext.find(e->name);
      if (it != ext.end()) return it->second;
      return db.relation(e->name);
    }
    case Expr::Kind::Guessed: {
      auto it = ext.find(e->name);
      if (it == ext.end()) throw Error("no extension for guessed relation: " + e->name);
      return it->second;
    }
    case Expr::Kind::DomPower:
      return eval_dom_power(db, e->power);
    case Expr::Kind::Select: {
      Relation in = eval_rec(e->left, db, ext);
      auto cp = compile_pred(e->predicate, in);
      Relation out(in.schema());
      for (const auto& t : in.tuples())
        if (eval_pred(*cp, t)) out.insert(t);
      return out;
    }
    case Expr::Kind::Project: {
      Relation in = eval_rec(e->left, db, ext);
      std::vector<std::size_t> cols;
      std::vector<std::string> schema;
      for (const auto& a : e->attrs) {
        std::size_t i = in.resolve(a);
        cols.push_back(i);
        schema.push_back(in.schema()[i]);
      }
      Relation out(schema);
      for (const auto& t : in.tuples()) {
        Tuple p;
        p.reserve(cols.size());
        for (auto c : cols) p.push_back(t[c]);
        out.insert(std::move(p));
      }
      return out;
    }
    case Expr::Kind::Product:
    case Expr::Kind::Join: {
      Relation l = eval_rec(e->left, db, ext);
      Relation r = eval_rec(e->right, db, ext);
      std::vector<std::string> schema = qualified_schema(e->left, l);
      auto rs = qualified_schema(e->right, r);
      schema.insert(schema.end(), rs.begin(), rs.end());
      std::unique_ptr<CompiledPred> cp;
      if (e->kind == Expr::Kind::Join) cp = compile_join_pred(e->predicate, l, r);
      if (static_cast<std::uint64_t>(l.size()) * std::max<std::size_t>(r.size(), 1) >
          kMaxMaterialized)
        throw Error("product: materialization too large");
      Relation out(schema);
      Tuple combined;
      for (const auto& lt : l.tuples()) {
        for (const auto& rt : r.tuples()) {
          combined = lt;
          combined.insert(combined.end(), rt.begin(), rt.end());
          if (!cp || eval_pred(*cp, combined)) out.insert(combined);
        }
      }
      return out;
    }
    case Expr::Kind::Union: {
      Relation l = eval_rec(e->left, db, ext);
      Relation r = eval_rec(e->right, db, ext);
      check_equal_arity(l, r, "union");
      Relation out(l.schema());
      for (const auto& t : l.tuples()) out.insert(t);
      for (const auto& t : r.tuples()) out.insert(t);
      return out;
    }
    case Expr::Kind::Difference: {
      Relation r = eval_rec(e->right, db, ext);
      // DOM^k - R streams the power instead of materializing it separately.
      if (e->left->kind == Expr::Kind::DomPower) {
        int k = e->left->power;
        if (static_cast<std::size_t>(k) != r.arity())
          throw Error("difference: arity mismatch (DOM^" + std::to_string(k) + " vs " +
                      std::to_string(r.arity()) + ")");
        Relation out(power_schema(k));
        std::uint64_t kept = 0;
        for_each_dom_power(db.dom(), k, [&](const Tuple& t) {
          if (!r.contains(t)) {
            if (++kept > kMaxMaterialized) throw Error("difference: result too large");
            out.insert(t);
          }
          return true;
        });
        return out;
      }
      Relation l = eval_rec(e->left, db, ext);
      check_equal_arity(l, r, "difference");
      Relation out(l.schema());
      for (const auto& t : l.tuples())
        if (!r.contains(t)) out.insert(t);
      return out;
    }
    case Expr::Kind::SymDiff: {
      Relation l = eval_rec(e->left, db, ext);
      Relation r = eval_rec(e->right, db, ext);
      return sym_diff(l, r);
    }
    case Expr::Kind::Divide: {
      Relation l = eval_rec(e->left, db, ext);
      Relation r = eval_rec(e->right, db, ext);
      return divide(l, r);
    }
    case Expr::Kind::Rename: {
      Relation in = eval_rec(e->left, db, ext);
      if (e->new_names.size() != in.arity())
        throw Error("rename: expected " + std::to_string(in.arity()) + " names, got " +
                    std::to_string(e->new_names.size()));
      Relation out(e->new_names);
      for (const auto& t : in.tuples()) out.insert(t);
      return out;
    }
    case Expr::Kind::Let: {
      Relation bound = eval_rec(e->left, db, ext);
      Extensions inner = ext;
      inner[e->name] = std::move(bound);
      return eval_rec(e->right, db, inner);
    }
  }
  throw Error("bad expression kind");
}

}  // namespace

Relation evaluate(const ExprPtr& e, const Database& db, const Extensions& ext) {
  return eval_rec(e, db, ext);
}

Relation divide(const Relation& a, const Relation& b) {
  if (b.arity() < 1 || a.arity() <= b.arity())
    throw Error("divide: requires arity(a) > arity(b) >= 1");
  if (b.empty()) throw Error("divide: empty divisor");
  std::size_t d = a.arity() - b.arity();
  std::vector<std::string> schema(a.schema().begin(), a.schema().begin() + d);
  Relation out(schema);
  // Candidate left parts are the projections of a.
  std::set<Tuple> candidates;
  for (const auto& t : a.tuples()) candidates.insert(Tuple(t.begin(), t.begin() + d));
  for (const auto& c : candidates) {
    bool all = true;
    for (const auto& u : b.tuples()) {
      Tuple full = c;
      full.insert(full.end(), u.begin(), u.end());
      if (!a.contains(full)) {
        all = false;
        break;
      }
    }
    if (all) out.insert(c);
  }
  return out;
}

Relation sym_diff(const Relation& a, const Relation& b) {
  check_equal_arity(a, b, "sym_diff");
  Relation out(a.schema());
  for (const auto& t : a.tuples())
    if (!b.contains(t)) out.insert(t);
  for (const auto& t : b.tuples())
    if (!a.contains(t)) out.insert(t);
  return out;
}

Relation dom_power(const Database& db, int k) {
  if (k < 1) throw Error("dom_power: k must be >= 1");
  return eval_dom_power(db, k);
}

}  // namespace npalg
