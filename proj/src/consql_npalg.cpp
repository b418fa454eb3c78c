#include <algorithm>

#include "npalg/consql_solve.hpp"
#include "npalg/sugar.hpp"

namespace npalg::consql {

namespace {

CmpOp to_cmpop(Cond::Op op) {
  switch (op) {
    case Cond::Op::Eq: return CmpOp::Eq;
    case Cond::Op::Ne: return CmpOp::Ne;
    case Cond::Op::Lt: return CmpOp::Lt;
    case Cond::Op::Le: return CmpOp::Le;
    case Cond::Op::Gt: return CmpOp::Gt;
    case Cond::Op::Ge: return CmpOp::Ge;
  }
  throw Error("bad comparison operator");
}

ExprPtr arity1(ExprPtr e) { return expr::project({"$1"}, std::move(e), true); }

void flatten_and(const CondPtr& c, std::vector<CondPtr>& out) {
  if (c->kind == Cond::Kind::And) {
    flatten_and(c->a, out);
    flatten_and(c->b, out);
  } else {
    out.push_back(c);
  }
}

struct Frame {
  std::string alias;
  std::vector<std::string> cols;
  std::size_t offset = 0;
};

PredTerm to_term(const ScalarPtr& s, const std::vector<Frame>& frames) {
  switch (s->kind) {
    case Scalar::Kind::IntLit: return PredTerm::constant(Constant::integer(s->int_val));
    case Scalar::Kind::TextLit: return PredTerm::constant(Constant::symbol(s->text_val));
    case Scalar::Kind::Column: {
      std::size_t found = 0;
      int matches = 0;
      for (const auto& f : frames) {
        if (!s->table.empty() && f.alias != s->table) continue;
        for (std::size_t i = 0; i < f.cols.size(); ++i)
          if (f.cols[i] == s->column) {
            found = f.offset + i;
            ++matches;
          }
      }
      if (matches != 1)
        throw Error("cannot resolve column " +
                    (s->table.empty() ? s->column : s->table + "." + s->column));
      return PredTerm::attribute("$" + std::to_string(found + 1));
    }
    default:
      throw Error("lower_to_npalg: only column references and literals are supported "
                  "in comparisons");
  }
}

/// Output column names of a guessed table (declared aliases win).
std::vector<std::string> guess_columns(const GuessedTableSpec& g) {
  if (!g.aliases.empty()) return g.aliases;
  std::vector<std::string> out;
  for (const auto& item : g.body->select) {
    if (item.star || !item.expr || item.expr->kind != Scalar::Kind::Column)
      throw Error("lower_to_npalg: GUESS body select items must be plain columns");
    out.push_back(item.alias.empty() ? item.expr->column : item.alias);
  }
  return out;
}

ExprPtr translate_subquery(const QueryPtr& q, const Database& db,
                           const std::map<std::string, std::vector<std::string>>& guesses) {
  if (q->union_next) throw Error("lower_to_npalg: UNION is not supported in checks");
  ExprPtr prod;
  std::vector<Frame> frames;
  std::size_t offset = 0;
  for (const auto& it : q->from) {
    if (it.kind != FromItem::Kind::Table)
      throw Error("lower_to_npalg: check subqueries may only join plain tables");
    ExprPtr e;
    Frame f;
    auto gi = guesses.find(it.table);
    if (gi != guesses.end()) {
      e = expr::guessed(it.table);
      f.cols = gi->second;
    } else {
      e = expr::base(it.table);
      f.cols = db.relation(it.table).schema();
    }
    f.alias = it.alias.empty() ? it.table : it.alias;
    f.offset = offset;
    offset += f.cols.size();
    frames.push_back(std::move(f));
    prod = prod ? expr::product(std::move(prod), std::move(e)) : std::move(e);
  }
  if (!prod) throw Error("lower_to_npalg: empty FROM clause");
  if (q->where) {
    std::vector<CondPtr> conjuncts;
    flatten_and(q->where, conjuncts);
    std::vector<PredPtr> preds;
    for (const auto& c : conjuncts) {
      if (c->kind != Cond::Kind::Cmp)
        throw Error("lower_to_npalg: checks must be conjunctions of comparisons");
      preds.push_back(
          pred::cmp(to_term(c->lhs, frames), to_cmpop(c->op), to_term(c->rhs, frames)));
    }
    prod = expr::select(pred::all_of(std::move(preds)), std::move(prod));
  }
  return prod;
}

}  // namespace

NpAlgQuery lower_to_npalg(const Specification& spec, const Database& db,
                          const LowerOptions& opts) {
  if (spec.objective)
    throw Error("lower_to_npalg: only decision-form specifications (no objective)");
  NpAlgQuery q;
  std::map<std::string, std::vector<std::string>> guesses;
  std::vector<ExprPtr> terms;

  for (const auto& g : spec.guesses) {
    if (g.body->union_next || g.body->from.size() != 1)
      throw Error("lower_to_npalg: a GUESS body must have exactly one shape FROM item");
    const FromItem& it = g.body->from[0];
    if (g.body->where) throw Error("lower_to_npalg: WHERE in a GUESS body is not supported");
    if (it.domain.size() != 1 || it.domain[0].kind != FromItem::Kind::Table)
      throw Error("lower_to_npalg: shape domains must be a single table");
    const std::string& domain_table = it.domain[0].table;
    std::vector<std::string> cols = guess_columns(g);
    guesses[g.name] = cols;

    switch (it.kind) {
      case FromItem::Kind::SubsetOf: {
        // G must be contained in the projection of its domain table.
        std::vector<std::string> sel_cols;
        for (const auto& item : g.body->select) {
          if (item.star) {
            for (const auto& cname : db.relation(domain_table).schema())
              sel_cols.push_back(cname);
          } else {
            sel_cols.push_back(item.expr->column);
          }
        }
        q.guesses.push_back({g.name, static_cast<int>(sel_cols.size())});
        terms.push_back(arity1(expr::difference(
            expr::guessed(g.name), expr::project(sel_cols, expr::base(domain_table), true))));
        break;
      }
      case FromItem::Kind::FunctionTo: {
        if (!it.range.is_table)
          throw Error("lower_to_npalg: only FUNCTION_TO(table) ranges are supported");
        if (cols.size() != 2)
          throw Error("lower_to_npalg: a function guess must select a key and the field");
        const Relation& range_rel = db.relation(it.range.table);
        std::string key = range_rel.schema().empty() ? "" : range_rel.schema()[0];
        auto o = opts.keys.find(it.range.table);
        if (o != opts.keys.end()) key = o->second;
        ExprPtr dom_e =
            expr::project({g.body->select[0].expr->column}, expr::base(domain_table), true);
        ExprPtr rng_e = expr::project({key}, expr::base(it.range.table), true);
        q.guesses.push_back({g.name, 2});
        terms.push_back(sugar::fail_function_family(sugar::FunctionKind::Function,
                                                    expr::guessed(g.name), dom_e, rng_e, 1, 1));
        if (it.total)
          terms.push_back(sugar::fail_function_family(sugar::FunctionKind::Total,
                                                      expr::guessed(g.name), dom_e, rng_e, 1, 1));
        break;
      }
      default:
        throw Error("lower_to_npalg: only SUBSET OF and FUNCTION_TO(table) shapes "
                    "are supported");
    }
  }

  for (const auto& c : spec.checks) {
    if (c->kind == Cond::Kind::NotExists) {
      terms.push_back(arity1(translate_subquery(c->sub, db, guesses)));
    } else if (c->kind == Cond::Kind::Exists) {
      terms.push_back(sugar::empty_test(translate_subquery(c->sub, db, guesses)));
    } else {
      throw Error("lower_to_npalg: checks must be EXISTS or NOT EXISTS subqueries");
    }
  }
  q.fail = expr::union_all(std::move(terms));
  return q;
}

}  // namespace npalg::consql
