#include "npalg/fo.hpp"

#include "npalg/sugar.hpp"

#include <algorithm>
#include <set>

namespace npalg {

namespace fo {

FoPtr atom(std::string predicate, std::vector<FoTerm> args) {
  auto f = std::make_shared<FoFormula>();
  f->kind = FoFormula::Kind::Atom;
  f->predicate = std::move(predicate);
  f->args = std::move(args);
  return f;
}

FoPtr equals(FoTerm lhs, FoTerm rhs) {
  auto f = std::make_shared<FoFormula>();
  f->kind = FoFormula::Kind::Equality;
  f->args = {std::move(lhs), std::move(rhs)};
  return f;
}

static FoPtr binary_node(FoFormula::Kind k, FoPtr a, FoPtr b) {
  auto f = std::make_shared<FoFormula>();
  f->kind = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

FoPtr conj(FoPtr a, FoPtr b) { return binary_node(FoFormula::Kind::And, std::move(a), std::move(b)); }
FoPtr disj(FoPtr a, FoPtr b) { return binary_node(FoFormula::Kind::Or, std::move(a), std::move(b)); }

FoPtr neg(FoPtr a) {
  auto f = std::make_shared<FoFormula>();
  f->kind = FoFormula::Kind::Not;
  f->a = std::move(a);
  return f;
}

static void collect_vars(const FoPtr& f, std::set<std::string>& out) {
  if (!f) return;
  for (const auto& t : f->args)
    if (t.is_var) out.insert(t.var);
  collect_vars(f->a, out);
  collect_vars(f->b, out);
}

std::vector<std::string> free_vars(const FoPtr& f) {
  std::set<std::string> s;
  collect_vars(f, s);
  return {s.begin(), s.end()};
}

}  // namespace fo

namespace {

std::string col(std::size_t i) { return "$" + std::to_string(i + 1); }  // 0-based index in

/// A translated subformula: expression whose schema is `vars` (sorted).
struct Translated {
  ExprPtr e;
  std::vector<std::string> vars;
};

std::size_t index_of(const std::vector<std::string>& vars, const std::string& v) {
  return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
}

/// Implicitly projects positions (0-based) out of e and renames them.
ExprPtr pick_and_rename(ExprPtr e, const std::vector<std::size_t>& positions,
                        std::vector<std::string> names) {
  std::vector<std::string> attrs;
  for (auto p : positions) attrs.push_back(col(p));
  return expr::rename(std::move(names), expr::project(std::move(attrs), std::move(e), true));
}

/// Pads e (schema = vars, sorted) with one DOM column per missing target
/// variable and reorders to the sorted target variable list.
Translated pad_to(Translated t, const std::vector<std::string>& target) {
  std::vector<std::string> order = t.vars;  // column order after padding
  ExprPtr e = t.e;
  for (const auto& v : target)
    if (std::find(t.vars.begin(), t.vars.end(), v) == t.vars.end()) {
      e = expr::product(std::move(e), expr::dom());
      order.push_back(v);
    }
  std::vector<std::size_t> positions;
  for (const auto& v : target) positions.push_back(index_of(order, v));
  return {pick_and_rename(std::move(e), positions, target), target};
}

Translated translate(const FoPtr& f, const Vocabulary& vocab);

Translated translate_atom(const FoFormula& f, const Vocabulary& vocab) {
  auto it = vocab.find(f.predicate);
  if (it == vocab.end()) throw Error("unknown predicate: " + f.predicate);
  if (static_cast<int>(f.args.size()) != it->second.arity)
    throw Error("atom " + f.predicate + " expects arity " + std::to_string(it->second.arity) +
                ", got " + std::to_string(f.args.size()));

  ExprPtr e = it->second.guessed ? expr::guessed(f.predicate) : expr::base(f.predicate);

  // Selections for constants and repeated variables.
  std::vector<PredPtr> conds;
  std::map<std::string, std::size_t> first_pos;
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    const auto& t = f.args[i];
    if (!t.is_var) {
      conds.push_back(pred::cmp_const(col(i), CmpOp::Eq, t.value));
    } else if (auto fp = first_pos.find(t.var); fp != first_pos.end()) {
      conds.push_back(pred::cmp_attrs(col(i), CmpOp::Eq, col(fp->second)));
    } else {
      first_pos.emplace(t.var, i);
    }
  }
  if (first_pos.empty()) throw Error("atom " + f.predicate + " mentions no variable");
  if (!conds.empty()) e = expr::select(pred::all_of(std::move(conds)), std::move(e));

  std::vector<std::string> vars;
  for (const auto& [v, p] : first_pos) vars.push_back(v);  // map iterates sorted
  std::vector<std::size_t> positions;
  for (const auto& v : vars) positions.push_back(first_pos.at(v));
  return {pick_and_rename(std::move(e), positions, vars), vars};
}

Translated translate_equality(const FoFormula& f) {
  const auto& l = f.args[0];
  const auto& r = f.args[1];
  if (l.is_var && r.is_var) {
    if (l.var == r.var) return {expr::rename({l.var}, expr::dom()), {l.var}};
    std::vector<std::string> vars = {l.var, r.var};
    std::sort(vars.begin(), vars.end());
    auto e = expr::select(pred::cmp_attrs("$1", CmpOp::Eq, "$2"), expr::dom_power(2));
    return {expr::rename(vars, std::move(e)), vars};
  }
  if (l.is_var || r.is_var) {
    const auto& v = l.is_var ? l.var : r.var;
    const auto& c = l.is_var ? r.value : l.value;
    auto e = expr::select(pred::cmp_const("$1", CmpOp::Eq, c), expr::dom());
    return {expr::rename({v}, std::move(e)), {v}};
  }
  throw Error("equality between two constants is not allowed");
}

Translated translate(const FoPtr& f, const Vocabulary& vocab) {
  if (!f) throw Error("null formula");
  switch (f->kind) {
    case FoFormula::Kind::Atom:
      return translate_atom(*f, vocab);
    case FoFormula::Kind::Equality:
      return translate_equality(*f);
    case FoFormula::Kind::And: {
      auto l = translate(f->a, vocab);
      auto r = translate(f->b, vocab);
      std::set<std::string> uni(l.vars.begin(), l.vars.end());
      uni.insert(r.vars.begin(), r.vars.end());
      std::vector<std::string> vars(uni.begin(), uni.end());
      auto e = expr::product(l.e, r.e);
      std::vector<PredPtr> conds;
      for (const auto& v : r.vars) {
        auto li = index_of(l.vars, v);
        if (li < l.vars.size())
          conds.push_back(
              pred::cmp_attrs(col(li), CmpOp::Eq, col(l.vars.size() + index_of(r.vars, v))));
      }
      if (!conds.empty()) e = expr::select(pred::all_of(std::move(conds)), std::move(e));
      std::vector<std::size_t> positions;
      for (const auto& v : vars) {
        auto li = index_of(l.vars, v);
        positions.push_back(li < l.vars.size() ? li : l.vars.size() + index_of(r.vars, v));
      }
      return {pick_and_rename(std::move(e), positions, vars), vars};
    }
    case FoFormula::Kind::Or: {
      auto l = translate(f->a, vocab);
      auto r = translate(f->b, vocab);
      std::set<std::string> uni(l.vars.begin(), l.vars.end());
      uni.insert(r.vars.begin(), r.vars.end());
      std::vector<std::string> vars(uni.begin(), uni.end());
      auto lp = pad_to(std::move(l), vars);
      auto rp = pad_to(std::move(r), vars);
      return {expr::set_union(lp.e, rp.e), vars};
    }
    case FoFormula::Kind::Not: {
      auto c = translate(f->a, vocab);
      auto e = expr::difference(expr::dom_power(static_cast<int>(c.vars.size())), c.e);
      return {expr::rename(c.vars, std::move(e)), c.vars};
    }
  }
  throw Error("bad formula node");
}

}  // namespace

ExprPtr translate_fo(const FoPtr& phi, const Vocabulary& vocab) {
  return translate(phi, vocab).e;
}

NpAlgQuery build_psi(const EsoSentence& s, const Database& db) {
  Vocabulary vocab;
  for (const auto& [name, rel] : db.relations())
    vocab[name] = {static_cast<int>(rel.arity()), false};
  for (const auto& g : s.second_order) {
    if (vocab.count(g.name))
      throw Error("guessed predicate " + g.name + " clashes with a base relation");
    vocab[g.name] = {g.arity, true};
  }

  std::set<std::string> declared(s.universal_vars.begin(), s.universal_vars.end());
  declared.insert(s.existential_vars.begin(), s.existential_vars.end());
  if (declared.size() != s.universal_vars.size() + s.existential_vars.size())
    throw Error("universal and existential variable lists must be disjoint");
  auto matrix_vars = fo::free_vars(s.matrix);
  for (const auto& v : matrix_vars)
    if (!declared.count(v)) throw Error("matrix variable " + v + " is not quantified");

  Translated phi{translate_fo(s.matrix, vocab), matrix_vars};
  std::vector<std::string> all_vars(declared.begin(), declared.end());
  phi = pad_to(std::move(phi), all_vars);

  NpAlgQuery q;
  q.guesses = s.second_order;
  if (s.universal_vars.empty()) {
    q.fail = sugar::empty_test(phi.e);
  } else {
    auto projected = expr::project(s.universal_vars, phi.e);
    q.fail = expr::difference(expr::dom_power(static_cast<int>(s.universal_vars.size())),
                              std::move(projected));
  }
  return q;
}

bool q_free(const ExprPtr& e) {
  if (!e) return true;
  if (e->kind == Expr::Kind::Project && !e->implicit_proj) return false;
  return q_free(e->left) && q_free(e->right);
}

}  // namespace npalg
