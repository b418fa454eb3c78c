#include <algorithm>
#include <set>

#include "npalg/consql_solve.hpp"

namespace npalg::consql {

namespace {

// ---- scopes and name resolution ----

struct Binding {
  std::string alias;  // qualifier; empty for bare extra-field bindings
  const std::string* cols = nullptr;
  const Constant* vals = nullptr;
  std::size_t n = 0;
};

struct Scope {
  const Scope* parent = nullptr;
  std::vector<Binding> binds;
};

const Constant* resolve_column(const Scope* scope, const std::string& table,
                               const std::string& column) {
  for (const Scope* s = scope; s; s = s->parent) {
    const Constant* found = nullptr;
    int matches = 0;
    for (const auto& b : s->binds) {
      if (!table.empty() && b.alias != table) continue;
      for (std::size_t i = 0; i < b.n; ++i)
        if (b.cols[i] == column) {
          found = &b.vals[i];
          ++matches;
        }
    }
    if (matches > 1)
      throw Error("ambiguous column reference: " +
                  (table.empty() ? column : table + "." + column));
    if (matches == 1) return found;
  }
  throw Error("unknown column: " + (table.empty() ? column : table + "." + column));
}

bool contains_aggregate(const ScalarPtr& e) {
  if (!e) return false;
  if (e->kind == Scalar::Kind::CountStar || e->kind == Scalar::Kind::Sum) return true;
  return contains_aggregate(e->a) || contains_aggregate(e->b);
}

Table eval_query_scoped(const QueryPtr& q, const Env& env, const Scope* outer);

Constant eval_scalar(const ScalarPtr& e, const Scope* scope, const Env& env) {
  switch (e->kind) {
    case Scalar::Kind::Column: return *resolve_column(scope, e->table, e->column);
    case Scalar::Kind::IntLit: return Constant::integer(e->int_val);
    case Scalar::Kind::TextLit: return Constant::symbol(e->text_val);
    case Scalar::Kind::Add:
    case Scalar::Kind::Sub:
    case Scalar::Kind::Mul: {
      auto a = eval_scalar(e->a, scope, env).as_int();
      auto b = eval_scalar(e->b, scope, env).as_int();
      return Constant::integer(e->kind == Scalar::Kind::Add   ? a + b
                               : e->kind == Scalar::Kind::Sub ? a - b
                                                              : a * b);
    }
    case Scalar::Kind::CountStar:
    case Scalar::Kind::Sum:
      throw Error("aggregate used outside an aggregate select list");
    case Scalar::Kind::Subquery: {
      Table t = eval_query_scoped(e->sub, env, scope);
      if (t.columns.size() != 1)
        throw Error("scalar subquery must return one column");
      if (t.rows.size() != 1)
        throw Error("scalar subquery returned " + std::to_string(t.rows.size()) + " rows");
      return t.rows[0][0];
    }
  }
  throw Error("bad scalar kind");
}

bool eval_cmp(Cond::Op op, const Constant& a, const Constant& b) {
  if (a.kind() != b.kind())
    throw Error("type error in comparison: " + a.to_string() + " vs " + b.to_string());
  switch (op) {
    case Cond::Op::Eq: return a == b;
    case Cond::Op::Ne: return a != b;
    case Cond::Op::Lt: return a < b;
    case Cond::Op::Le: return a < b || a == b;
    case Cond::Op::Gt: return b < a;
    case Cond::Op::Ge: return b < a || a == b;
  }
  throw Error("bad comparison operator");
}

bool eval_cond(const CondPtr& c, const Scope* scope, const Env& env) {
  switch (c->kind) {
    case Cond::Kind::Cmp:
      return eval_cmp(c->op, eval_scalar(c->lhs, scope, env), eval_scalar(c->rhs, scope, env));
    case Cond::Kind::And: return eval_cond(c->a, scope, env) && eval_cond(c->b, scope, env);
    case Cond::Kind::Or: return eval_cond(c->a, scope, env) || eval_cond(c->b, scope, env);
    case Cond::Kind::Not: return !eval_cond(c->a, scope, env);
    case Cond::Kind::Exists: return !eval_query_scoped(c->sub, env, scope).rows.empty();
    case Cond::Kind::NotExists: return eval_query_scoped(c->sub, env, scope).rows.empty();
    case Cond::Kind::In:
    case Cond::Kind::NotIn: {
      Constant v = eval_scalar(c->lhs, scope, env);
      Table t = eval_query_scoped(c->sub, env, scope);
      if (t.columns.size() != 1) throw Error("IN subquery must return one column");
      bool in = false;
      for (const auto& r : t.rows)
        if (r[0] == v) {
          in = true;
          break;
        }
      return c->kind == Cond::Kind::In ? in : !in;
    }
  }
  throw Error("bad condition kind");
}

std::string output_name(const SelectItem& item, std::size_t idx) {
  if (!item.alias.empty()) return item.alias;
  if (item.expr) {
    switch (item.expr->kind) {
      case Scalar::Kind::Column: return item.expr->column;
      case Scalar::Kind::CountStar: return "count";
      case Scalar::Kind::Sum: return "sum";
      default: break;
    }
  }
  return "c" + std::to_string(idx + 1);
}

/// Runs `body` once per joined row combination of `sources` that passes
/// `where`; each source contributes its bindings.
struct Source {
  std::string alias;
  const Table* table = nullptr;
};

template <typename Fn>
void join_loop(const std::vector<Source>& sources, const CondPtr& where, const Env& env,
               const Scope* outer, Fn&& body) {
  std::vector<std::size_t> idx(sources.size(), 0);
  for (const auto& s : sources)
    if (s.table->rows.empty()) return;
  while (true) {
    Scope scope;
    scope.parent = outer;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const auto& t = *sources[i].table;
      scope.binds.push_back(
          {sources[i].alias, t.columns.data(), t.rows[idx[i]].data(), t.columns.size()});
    }
    if (!where || eval_cond(where, &scope, env)) body(scope);
    std::size_t p = sources.size();
    while (p > 0) {
      --p;
      if (++idx[p] < sources[p].table->rows.size()) break;
      idx[p] = 0;
      if (p == 0) return;
    }
  }
}

Table eval_select_block(const Query& q, const Env& env, const Scope* outer) {
  std::vector<Table> owned;  // derived-table results need stable storage
  owned.reserve(q.from.size());
  std::vector<Source> sources;
  for (const auto& it : q.from) {
    switch (it.kind) {
      case FromItem::Kind::Table: {
        auto found = env.find(it.table);
        if (found == env.end()) throw Error("unknown table: " + it.table);
        sources.push_back({it.alias.empty() ? it.table : it.alias, &found->second});
        break;
      }
      case FromItem::Kind::Derived: {
        owned.push_back(eval_query_scoped(it.derived, env, nullptr));
        sources.push_back({it.alias, nullptr});
        break;
      }
      default:
        throw Error("guess shapes are only allowed in a GUESS TABLE body");
    }
  }
  // Fix up pointers after `owned` stopped growing.
  for (std::size_t i = 0, d = 0; i < sources.size(); ++i)
    if (!sources[i].table) sources[i].table = &owned[d++];

  Table out;
  bool aggregate = false;
  for (const auto& item : q.select)
    if (!item.star && contains_aggregate(item.expr)) aggregate = true;

  if (aggregate) {
    for (const auto& item : q.select)
      if (item.star || !contains_aggregate(item.expr))
        throw Error("mixed aggregate and plain select items are not supported");
    std::vector<std::int64_t> acc(q.select.size(), 0);
    join_loop(sources, q.where, env, outer, [&](const Scope& scope) {
      for (std::size_t i = 0; i < q.select.size(); ++i) {
        const auto& e = q.select[i].expr;
        if (e->kind == Scalar::Kind::CountStar)
          acc[i] += 1;
        else if (e->kind == Scalar::Kind::Sum)
          acc[i] += eval_scalar(e->a, &scope, env).as_int();
        else
          throw Error("unsupported aggregate expression");
      }
    });
    std::vector<Constant> row;
    for (std::size_t i = 0; i < q.select.size(); ++i) {
      out.columns.push_back(output_name(q.select[i], i));
      row.push_back(Constant::integer(acc[i]));
    }
    out.rows.push_back(std::move(row));
    return out;
  }

  bool star = q.select.size() == 1 && q.select[0].star;
  if (star) {
    for (const auto& s : sources)
      for (const auto& c : s.table->columns) out.columns.push_back(c);
  } else {
    for (std::size_t i = 0; i < q.select.size(); ++i) {
      if (q.select[i].star) throw Error("'*' cannot be mixed with other select items");
      out.columns.push_back(output_name(q.select[i], i));
    }
  }
  join_loop(sources, q.where, env, outer, [&](const Scope& scope) {
    std::vector<Constant> row;
    if (star) {
      for (const auto& b : scope.binds)
        for (std::size_t i = 0; i < b.n; ++i) row.push_back(b.vals[i]);
    } else {
      for (const auto& item : q.select) row.push_back(eval_scalar(item.expr, &scope, env));
    }
    out.rows.push_back(std::move(row));
  });
  return out;
}

Table eval_query_scoped(const QueryPtr& q, const Env& env, const Scope* outer) {
  Table out = eval_select_block(*q, env, outer);
  if (q->union_next) {
    Table rest = eval_query_scoped(q->union_next, env, outer);
    if (rest.columns.size() != out.columns.size())
      throw Error("UNION arity mismatch");
    std::set<std::vector<Constant>> seen;
    Table merged;
    merged.columns = out.columns;
    for (const auto* part : {&out, &rest})
      for (const auto& r : part->rows)
        if (seen.insert(r).second) merged.rows.push_back(r);
    return merged;
  }
  return out;
}

// ---- lowering ----

std::vector<Constant> range_values(const FromItem& it, const Env& base,
                                   const LowerOptions& opts) {
  std::vector<Constant> out;
  if (it.range.is_table) {
    auto found = base.find(it.range.table);
    if (found == base.end()) throw Error("unknown range table: " + it.range.table);
    const Table& t = found->second;
    std::string key = t.columns.empty() ? "" : t.columns[0];
    auto o = opts.keys.find(it.range.table);
    if (o != opts.keys.end()) key = o->second;
    auto col = std::find(t.columns.begin(), t.columns.end(), key);
    if (col == t.columns.end())
      throw Error("key column " + key + " not found in table " + it.range.table);
    std::size_t ci = static_cast<std::size_t>(col - t.columns.begin());
    std::set<Constant> distinct;
    for (const auto& r : t.rows) distinct.insert(r[ci]);
    out.assign(distinct.begin(), distinct.end());
  } else {
    for (std::int64_t v = it.range.min; v <= it.range.max; ++v)
      out.push_back(Constant::integer(v));
  }
  return out;
}

Component build_component(const GuessedTableSpec& g, const FromItem& it, const Env& base,
                          const LowerOptions& opts) {
  Component c;
  c.guess_table = g.name;
  c.item_alias = it.alias;
  switch (it.kind) {
    case FromItem::Kind::SubsetOf: c.kind = Component::Kind::Subset; break;
    case FromItem::Kind::FunctionTo:
      c.kind = it.total ? Component::Kind::TotalFunction : Component::Kind::PartialFunction;
      break;
    case FromItem::Kind::Partition: c.kind = Component::Kind::Partition; break;
    case FromItem::Kind::Permutation: c.kind = Component::Kind::Permutation; break;
    default: throw Error("not a guess shape");
  }
  if (it.kind != FromItem::Kind::SubsetOf) {
    if (it.fields.size() != 1)
      throw Error("exactly one extra field is supported per shape, got " +
                  std::to_string(it.fields.size()));
    c.field = it.fields[0];
  }
  // Flatten the shape's domain from-clause into one row list.
  std::vector<const Table*> parts;
  for (const auto& d : it.domain) {
    auto found = base.find(d.table);
    if (found == base.end()) throw Error("unknown table: " + d.table);
    Component::Segment seg;
    seg.alias = d.alias.empty() ? d.table : d.alias;
    seg.first = c.columns.size();
    seg.count = found->second.columns.size();
    c.segments.push_back(seg);
    for (const auto& col : found->second.columns) c.columns.push_back(col);
    parts.push_back(&found->second);
  }
  std::vector<std::size_t> idx(parts.size(), 0);
  bool any_empty = false;
  for (const auto* p : parts) any_empty |= p->rows.empty();
  if (!parts.empty() && !any_empty) {
    while (true) {
      std::vector<Constant> row;
      for (std::size_t i = 0; i < parts.size(); ++i)
        for (const auto& v : parts[i]->rows[idx[i]]) row.push_back(v);
      c.rows.push_back(std::move(row));
      std::size_t p = parts.size();
      bool done = true;
      while (p > 0) {
        --p;
        if (++idx[p] < parts[p]->rows.size()) {
          done = false;
          break;
        }
        idx[p] = 0;
      }
      if (done) break;
    }
  }
  switch (c.kind) {
    case Component::Kind::Subset: break;
    case Component::Kind::TotalFunction:
    case Component::Kind::PartialFunction:
      c.values = range_values(it, base, opts);
      if (c.kind == Component::Kind::TotalFunction && c.values.empty() && !c.rows.empty())
        throw Error("empty range for a TOTAL function over a nonempty domain");
      break;
    case Component::Kind::Partition:
      c.parts = it.parts;
      if (c.parts < 1) throw Error("PARTITION needs at least one block");
      for (std::int64_t b = 1; b <= c.parts; ++b) c.values.push_back(Constant::integer(b));
      break;
    case Component::Kind::Permutation:
      for (std::size_t p = 1; p <= c.rows.size(); ++p)
        c.values.push_back(Constant::integer(static_cast<std::int64_t>(p)));
      break;
  }
  return c;
}

/// Bindings contributed by one component row under a state value.
void push_component_bindings(const Component& c, const std::vector<Constant>& full_row,
                             const std::vector<std::string>& full_cols, Scope& scope) {
  if (!c.item_alias.empty()) {
    scope.binds.push_back({c.item_alias, full_cols.data(), full_row.data(), full_cols.size()});
    return;
  }
  for (const auto& seg : c.segments)
    scope.binds.push_back(
        {seg.alias, full_cols.data() + seg.first, full_row.data() + seg.first, seg.count});
  if (!c.field.empty())
    scope.binds.push_back(
        {"", full_cols.data() + c.columns.size(), full_row.data() + c.columns.size(), 1});
}

/// The visible rows of one component under a state: domain row (+ field).
struct ComponentRows {
  const Component* comp = nullptr;
  std::vector<std::string> cols;                // columns (+ field)
  std::vector<std::vector<Constant>> rows;
};

ComponentRows component_rows(const Component& c, const std::vector<int>& state) {
  ComponentRows out;
  out.comp = &c;
  out.cols = c.columns;
  if (!c.field.empty()) out.cols.push_back(c.field);
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    int v = state[r];
    std::vector<Constant> row = c.rows[r];
    switch (c.kind) {
      case Component::Kind::Subset:
        if (v == 0) continue;
        break;
      case Component::Kind::PartialFunction:
        if (v == 0) continue;
        row.push_back(c.values[static_cast<std::size_t>(v - 1)]);
        break;
      case Component::Kind::TotalFunction:
      case Component::Kind::Partition:
      case Component::Kind::Permutation:
        row.push_back(c.values[static_cast<std::size_t>(v)]);
        break;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

Table materialize_guess(const SearchProblem& problem, const GuessPlan& plan,
                        const SearchState& state) {
  // Sources: base tables and component row sets.
  std::vector<ComponentRows> comp_rows;
  struct Src {
    const ComponentRows* comp = nullptr;
    Source plain;
  };
  comp_rows.reserve(plan.from.size());
  std::vector<int> comp_of;  // index into comp_rows per from entry, or -1
  for (const auto& e : plan.from) {
    if (e.component >= 0) {
      comp_rows.push_back(component_rows(problem.components[static_cast<std::size_t>(e.component)],
                                         state.comp[static_cast<std::size_t>(e.component)]));
      comp_of.push_back(static_cast<int>(comp_rows.size()) - 1);
    } else {
      comp_of.push_back(-1);
    }
  }

  Table out;
  out.columns = plan.columns;

  // Nested joins over all entries with custom bindings per component entry.
  std::vector<std::size_t> sizes, idx(plan.from.size(), 0);
  std::vector<const Table*> plain(plan.from.size(), nullptr);
  for (std::size_t i = 0; i < plan.from.size(); ++i) {
    if (comp_of[i] >= 0) {
      sizes.push_back(comp_rows[static_cast<std::size_t>(comp_of[i])].rows.size());
    } else {
      auto found = problem.base.find(plan.from[i].table);
      if (found == problem.base.end()) throw Error("unknown table: " + plan.from[i].table);
      plain[i] = &found->second;
      sizes.push_back(found->second.rows.size());
    }
    if (sizes.back() == 0) return out;
  }

  bool star = plan.select.size() == 1 && plan.select[0].star;
  while (true) {
    Scope scope;
    for (std::size_t i = 0; i < plan.from.size(); ++i) {
      if (comp_of[i] >= 0) {
        const auto& cr = comp_rows[static_cast<std::size_t>(comp_of[i])];
        push_component_bindings(*cr.comp, cr.rows[idx[i]], cr.cols, scope);
      } else {
        const auto& e = plan.from[i];
        scope.binds.push_back({e.alias.empty() ? e.table : e.alias,
                               plain[i]->columns.data(), plain[i]->rows[idx[i]].data(),
                               plain[i]->columns.size()});
      }
    }
    if (!plan.where || eval_cond(plan.where, &scope, problem.base)) {
      std::vector<Constant> row;
      if (star) {
        for (const auto& b : scope.binds)
          for (std::size_t k = 0; k < b.n; ++k) row.push_back(b.vals[k]);
      } else {
        for (const auto& item : plan.select)
          row.push_back(eval_scalar(item.expr, &scope, problem.base));
      }
      if (row.size() != out.columns.size())
        throw Error("guessed table " + plan.name + " row width does not match its schema");
      out.rows.push_back(std::move(row));
    }
    std::size_t p = plan.from.size();
    while (p > 0) {
      --p;
      if (++idx[p] < sizes[p]) break;
      idx[p] = 0;
      if (p == 0) return out;
    }
  }
}

}  // namespace

// ---- conversions ----

Table to_table(const Relation& r) {
  Table t;
  t.columns = r.schema();
  for (const auto& tup : r.tuples()) t.rows.push_back(tup);
  return t;
}

Relation to_relation(const Table& t) {
  Relation r(t.columns);
  for (const auto& row : t.rows) r.insert(row);
  return r;
}

Env to_env(const Database& db) {
  Env env;
  for (const auto& [name, rel] : db.relations()) env[name] = to_table(rel);
  return env;
}

Table eval_query(const QueryPtr& q, const Env& env) { return eval_query_scoped(q, env, nullptr); }

// ---- component and problem sizing ----

std::size_t Component::choices_per_row() const {
  switch (kind) {
    case Kind::Subset: return 2;
    case Kind::TotalFunction: return values.size();
    case Kind::PartialFunction: return values.size() + 1;
    case Kind::Partition: return static_cast<std::size_t>(parts);
    case Kind::Permutation: return 0;  // not a per-row product
  }
  return 0;
}

double Component::space_size() const {
  if (kind == Kind::Permutation) {
    double f = 1;
    for (std::size_t i = 2; i <= rows.size(); ++i) f *= static_cast<double>(i);
    return f;
  }
  double s = 1;
  for (std::size_t r = 0; r < rows.size(); ++r) s *= static_cast<double>(choices_per_row());
  return s;
}

double SearchProblem::space_size() const {
  double s = 1;
  for (const auto& c : components) s *= c.space_size();
  return s;
}

// ---- lowering ----

SearchProblem lower_spec(const Specification& spec, const Database& db,
                         const LowerOptions& opts) {
  SearchProblem p;
  p.spec = spec;
  p.base = to_env(db);
  for (const auto& g : spec.guesses) {
    GuessPlan plan;
    plan.name = g.name;
    plan.select = g.body->select;
    plan.where = g.body->where;
    if (g.body->union_next) throw Error("UNION is not supported in a GUESS TABLE body");
    std::vector<std::vector<std::string>> entry_cols;
    for (const auto& it : g.body->from) {
      GuessPlan::Entry e;
      switch (it.kind) {
        case FromItem::Kind::Table: {
          e.table = it.table;
          e.alias = it.alias;
          auto found = p.base.find(it.table);
          if (found == p.base.end()) throw Error("unknown table: " + it.table);
          entry_cols.push_back(found->second.columns);
          break;
        }
        case FromItem::Kind::Derived:
          throw Error("derived tables are not supported in a GUESS TABLE body");
        default: {
          Component c = build_component(g, it, p.base, opts);
          auto cols = c.columns;
          if (!c.field.empty()) cols.push_back(c.field);
          entry_cols.push_back(std::move(cols));
          e.component = static_cast<int>(p.components.size());
          p.components.push_back(std::move(c));
          break;
        }
      }
      plan.from.push_back(std::move(e));
    }
    // Output schema: declared aliases win; otherwise names derived from the
    // select list (or all source columns for SELECT *).
    std::vector<std::string> derived;
    if (plan.select.size() == 1 && plan.select[0].star) {
      for (const auto& cols : entry_cols)
        for (const auto& cname : cols) derived.push_back(cname);
    } else {
      for (std::size_t i = 0; i < plan.select.size(); ++i) {
        if (plan.select[i].star) throw Error("'*' cannot be mixed with other select items");
        derived.push_back(output_name(plan.select[i], i));
      }
    }
    if (!g.aliases.empty()) {
      if (g.aliases.size() != derived.size())
        throw Error("guessed table " + g.name + " declares " +
                    std::to_string(g.aliases.size()) + " columns but selects " +
                    std::to_string(derived.size()));
      plan.columns = g.aliases;
    } else {
      plan.columns = derived;
    }
    p.plans.push_back(std::move(plan));
  }
  return p;
}

Env materialize(const SearchProblem& problem, const SearchState& state) {
  if (state.comp.size() != problem.components.size())
    throw Error("state does not match the problem's components");
  for (std::size_t i = 0; i < problem.components.size(); ++i)
    if (state.comp[i].size() != problem.components[i].rows.size())
      throw Error("state component size mismatch");
  Env env = problem.base;
  for (const auto& plan : problem.plans)
    env[plan.name] = materialize_guess(problem, plan, state);
  return env;
}

// ---- evaluation ----

CheckResult eval_condition(const CondPtr& cond, const Env& env) {
  switch (cond->kind) {
    case Cond::Kind::NotExists: {
      auto n = static_cast<std::int64_t>(eval_query_scoped(cond->sub, env, nullptr).rows.size());
      return {n == 0, n};
    }
    case Cond::Kind::Exists: {
      bool ok = !eval_query_scoped(cond->sub, env, nullptr).rows.empty();
      return {ok, ok ? 0 : 1};
    }
    case Cond::Kind::And: {
      auto a = eval_condition(cond->a, env);
      auto b = eval_condition(cond->b, env);
      return {a.holds && b.holds, a.violations + b.violations};
    }
    default: {
      bool ok = eval_cond(cond, nullptr, env);
      return {ok, ok ? 0 : 1};
    }
  }
}

CheckResult eval_condition(const SearchProblem& problem, const CondPtr& cond,
                           const SearchState& state) {
  return eval_condition(cond, materialize(problem, state));
}

std::int64_t total_violations(const SearchProblem& problem, const SearchState& state) {
  Env env = materialize(problem, state);
  std::int64_t total = 0;
  for (const auto& c : problem.spec.checks) total += eval_condition(c, env).violations;
  return total;
}

std::int64_t eval_objective(const SearchProblem& problem, const SearchState& state) {
  if (!problem.spec.objective) throw Error("specification has no objective");
  Env env = materialize(problem, state);
  Table t = eval_query(problem.spec.objective->query, env);
  if (t.columns.size() != 1 || t.rows.size() != 1)
    throw Error("objective query must return exactly one row and one column");
  return t.rows[0][0].as_int();
}

std::map<std::string, Table> eval_returns(const SearchProblem& problem,
                                          const std::optional<SearchState>& state) {
  std::map<std::string, Table> out;
  Table answer;
  answer.columns = {"n"};
  if (state) {
    Env env = materialize(problem, *state);
    for (const auto& [name, q] : problem.spec.returns) out[name] = eval_query(q, env);
    answer.rows.push_back({Constant::integer(1)});
  } else {
    for (const auto& [name, q] : problem.spec.returns) out[name] = Table{};
  }
  out["ANSWER"] = std::move(answer);
  return out;
}

// ---- state enumeration ----

SearchState first_state(const SearchProblem& problem) {
  SearchState s;
  for (const auto& c : problem.components) {
    std::vector<int> v(c.rows.size(), 0);
    if (c.kind == Component::Kind::Permutation)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    s.comp.push_back(std::move(v));
  }
  return s;
}

namespace {

/// Advances one component in place; false when it wrapped to the first state.
bool advance_component(const Component& c, std::vector<int>& v) {
  if (c.kind == Component::Kind::Permutation)
    return std::next_permutation(v.begin(), v.end());
  std::size_t radix = c.choices_per_row();
  if (radix <= 1) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (++v[i] < static_cast<int>(radix)) return true;
    v[i] = 0;
  }
  return false;
}

}  // namespace

bool next_state(const SearchProblem& problem, SearchState& state) {
  for (std::size_t i = 0; i < problem.components.size(); ++i)
    if (advance_component(problem.components[i], state.comp[i])) return true;
  return false;
}

ExhaustiveResult solve_exhaustive(const SearchProblem& problem, std::uint64_t max_states) {
  if (problem.space_size() > static_cast<double>(max_states))
    throw Error("search space too large for exhaustive enumeration");
  ExhaustiveResult res;
  bool minimize = !problem.spec.objective || problem.spec.objective->minimize;
  SearchState s = first_state(problem);
  do {
    ++res.examined;
    if (total_violations(problem, s) != 0) continue;
    if (!problem.spec.objective) {
      res.found = true;
      res.best = s;
      return res;
    }
    std::int64_t obj = eval_objective(problem, s);
    bool better = !res.found || (minimize ? obj < *res.objective : obj > *res.objective);
    if (better) {
      res.found = true;
      res.best = s;
      res.objective = obj;
    }
  } while (next_state(problem, s));
  return res;
}

}  // namespace npalg::consql
