#include "npalg/polyfrag.hpp"

#include <algorithm>
#include <set>

#include "npalg/fo.hpp"

namespace npalg {

namespace {

// ---- boolean conditions over guessed-tuple variables, kept in CNF ----

// Literal encoding: +(v+1) for variable v, -(v+1) for its negation.
using Clause = std::vector<int>;

struct Cnf {
  bool is_false = false;
  std::vector<Clause> clauses;  // empty list = true (when !is_false)
};

Cnf cnf_true() { return {}; }
Cnf cnf_false() { return {true, {}}; }
Cnf cnf_lit(int var, bool negated) { return {false, {{negated ? -(var + 1) : var + 1}}}; }

constexpr std::size_t kMaxClauseWidth = 8;
constexpr std::size_t kMaxClauses = 4096;

/// Sorts/dedupes a clause; returns false when the clause is tautological.
bool simplify_clause(Clause& c) {
  std::sort(c.begin(), c.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i] == -c[i + 1]) return false;
  if (c.size() > kMaxClauseWidth)
    throw Error("fragment grounding: condition exceeds the 2SAT shape");
  return true;
}

void normalize(Cnf& f) {
  if (f.is_false) {
    f.clauses.clear();
    return;
  }
  std::sort(f.clauses.begin(), f.clauses.end());
  f.clauses.erase(std::unique(f.clauses.begin(), f.clauses.end()), f.clauses.end());
  for (const auto& c : f.clauses)
    if (c.empty()) {
      f = cnf_false();
      return;
    }
  if (f.clauses.size() > kMaxClauses)
    throw Error("fragment grounding: condition exceeds the 2SAT shape");
}

Cnf cnf_and(const Cnf& a, const Cnf& b) {
  if (a.is_false || b.is_false) return cnf_false();
  Cnf out;
  out.clauses = a.clauses;
  out.clauses.insert(out.clauses.end(), b.clauses.begin(), b.clauses.end());
  normalize(out);
  return out;
}

Cnf cnf_or(const Cnf& a, const Cnf& b) {
  if (a.is_false) return b;
  if (b.is_false) return a;
  if (a.clauses.empty() || b.clauses.empty()) return cnf_true();
  Cnf out;
  for (const auto& ca : a.clauses)
    for (const auto& cb : b.clauses) {
      Clause c = ca;
      c.insert(c.end(), cb.begin(), cb.end());
      if (simplify_clause(c)) out.clauses.push_back(std::move(c));
    }
  normalize(out);
  return out;
}

Cnf cnf_not(const Cnf& a) {
  if (a.is_false) return cnf_true();
  Cnf out = cnf_false();
  for (const auto& c : a.clauses) {
    Cnf units;  // the negation of one clause: all its literals flipped, anded
    for (int l : c) units.clauses.push_back({-l});
    out = cnf_or(out, units);
  }
  return out;
}

// ---- symbolic relations: tuple -> membership condition ----

struct SymRel {
  std::vector<std::string> schema;
  std::map<Tuple, Cnf> rows;  // missing tuple = condition false
};

void sym_insert(SymRel& r, Tuple t, Cnf fn) {
  if (fn.is_false) return;
  auto it = r.rows.find(t);
  if (it == r.rows.end())
    r.rows.emplace(std::move(t), std::move(fn));
  else
    it->second = cnf_or(it->second, fn);
}

bool compare_consts(const Constant& a, CmpOp op, const Constant& b) {
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

bool eval_pred_on(const PredPtr& p, const Tuple& t, const Relation& schema_probe) {
  switch (p->kind) {
    case Pred::Kind::Cmp: {
      const Constant& a = p->lhs.is_attr ? t[schema_probe.resolve(p->lhs.attr)] : p->lhs.value;
      const Constant& b = p->rhs.is_attr ? t[schema_probe.resolve(p->rhs.attr)] : p->rhs.value;
      return compare_consts(a, p->op, b);
    }
    case Pred::Kind::And:
      return eval_pred_on(p->a, t, schema_probe) && eval_pred_on(p->b, t, schema_probe);
    case Pred::Kind::Or:
      return eval_pred_on(p->a, t, schema_probe) || eval_pred_on(p->b, t, schema_probe);
    case Pred::Kind::Not:
      return !eval_pred_on(p->a, t, schema_probe);
  }
  throw Error("bad predicate kind");
}

bool eval_join_pred_on(const PredPtr& p, const Tuple& t, const Relation& l, const Relation& r) {
  switch (p->kind) {
    case Pred::Kind::Cmp: {
      const Constant& a = p->lhs.is_attr ? t[l.resolve(p->lhs.attr)] : p->lhs.value;
      const Constant& b =
          p->rhs.is_attr ? t[l.arity() + r.resolve(p->rhs.attr)] : p->rhs.value;
      return compare_consts(a, p->op, b);
    }
    case Pred::Kind::And:
      return eval_join_pred_on(p->a, t, l, r) && eval_join_pred_on(p->b, t, l, r);
    case Pred::Kind::Or:
      return eval_join_pred_on(p->a, t, l, r) || eval_join_pred_on(p->b, t, l, r);
    case Pred::Kind::Not:
      return !eval_join_pred_on(p->a, t, l, r);
  }
  throw Error("bad predicate kind");
}

void collect_guessed(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Guessed) out.insert(e->name);
  collect_guessed(e->left, out);
  collect_guessed(e->right, out);
}

bool has_guessed(const ExprPtr& e) {
  std::set<std::string> s;
  collect_guessed(e, s);
  return !s.empty();
}

std::string expr_alias(const ExprPtr& e) {
  if (e->kind == Expr::Kind::Base || e->kind == Expr::Kind::Guessed) return e->name;
  return {};
}

std::string qualify(const std::string& alias, const std::string& name) {
  if (alias.empty() || name.find('.') != std::string::npos || name.empty() || name[0] == '$')
    return name;
  return alias + "." + name;
}

std::vector<std::string> power_schema(int k) {
  std::vector<std::string> s;
  for (int i = 1; i <= k; ++i) s.push_back("$" + std::to_string(i));
  return s;
}

SymRel sym_eval(const ExprPtr& e, const Database& db, const std::string& guess,
                const std::vector<Tuple>& universe) {
  if (!has_guessed(e)) {
    Relation r = evaluate(e, db, {});
    SymRel out;
    out.schema = r.schema();
    for (const auto& t : r.tuples()) out.rows.emplace(t, cnf_true());
    return out;
  }
  switch (e->kind) {
    case Expr::Kind::Guessed: {
      if (e->name != guess) throw Error("fragment grounding: unexpected guessed relation");
      SymRel out;
      out.schema = power_schema(universe.empty() ? 1 : static_cast<int>(universe[0].size()));
      for (std::size_t i = 0; i < universe.size(); ++i)
        out.rows.emplace(universe[i], cnf_lit(static_cast<int>(i), false));
      return out;
    }
    case Expr::Kind::Select: {
      SymRel in = sym_eval(e->left, db, guess, universe);
      Relation probe(in.schema);
      SymRel out;
      out.schema = in.schema;
      for (const auto& [t, fn] : in.rows)
        if (eval_pred_on(e->predicate, t, probe)) out.rows.emplace(t, fn);
      return out;
    }
    case Expr::Kind::Project: {
      SymRel in = sym_eval(e->left, db, guess, universe);
      Relation probe(in.schema);
      std::vector<std::size_t> cols;
      SymRel out;
      for (const auto& a : e->attrs) {
        std::size_t i = probe.resolve(a);
        cols.push_back(i);
        out.schema.push_back(in.schema[i]);
      }
      for (const auto& [t, fn] : in.rows) {
        Tuple p;
        for (auto c : cols) p.push_back(t[c]);
        sym_insert(out, std::move(p), fn);
      }
      return out;
    }
    case Expr::Kind::Product:
    case Expr::Kind::Join: {
      SymRel l = sym_eval(e->left, db, guess, universe);
      SymRel r = sym_eval(e->right, db, guess, universe);
      Relation lp(l.schema), rp(r.schema);
      SymRel out;
      for (const auto& n : l.schema) out.schema.push_back(qualify(expr_alias(e->left), n));
      for (const auto& n : r.schema) out.schema.push_back(qualify(expr_alias(e->right), n));
      for (const auto& [lt, lf] : l.rows)
        for (const auto& [rt, rf] : r.rows) {
          Tuple t = lt;
          t.insert(t.end(), rt.begin(), rt.end());
          if (e->kind == Expr::Kind::Join && !eval_join_pred_on(e->predicate, t, lp, rp))
            continue;
          sym_insert(out, std::move(t), cnf_and(lf, rf));
        }
      return out;
    }
    case Expr::Kind::Union: {
      SymRel l = sym_eval(e->left, db, guess, universe);
      SymRel r = sym_eval(e->right, db, guess, universe);
      if (l.schema.size() != r.schema.size())
        throw Error("union: arity mismatch");
      for (const auto& [t, fn] : r.rows) sym_insert(l, t, fn);
      return l;
    }
    case Expr::Kind::Difference: {
      SymRel l = sym_eval(e->left, db, guess, universe);
      SymRel r = sym_eval(e->right, db, guess, universe);
      if (l.schema.size() != r.schema.size())
        throw Error("difference: arity mismatch");
      SymRel out;
      out.schema = l.schema;
      for (const auto& [t, fn] : l.rows) {
        auto it = r.rows.find(t);
        Cnf keep = it == r.rows.end() ? fn : cnf_and(fn, cnf_not(it->second));
        sym_insert(out, t, std::move(keep));
      }
      return out;
    }
    case Expr::Kind::SymDiff: {
      SymRel l = sym_eval(e->left, db, guess, universe);
      SymRel r = sym_eval(e->right, db, guess, universe);
      if (l.schema.size() != r.schema.size())
        throw Error("symmetric difference: arity mismatch");
      SymRel out;
      out.schema = l.schema;
      std::set<Tuple> keys;
      for (const auto& [t, fn] : l.rows) keys.insert(t);
      for (const auto& [t, fn] : r.rows) keys.insert(t);
      for (const auto& t : keys) {
        auto li = l.rows.find(t);
        auto ri = r.rows.find(t);
        Cnf a = li == l.rows.end() ? cnf_false() : li->second;
        Cnf b = ri == r.rows.end() ? cnf_false() : ri->second;
        sym_insert(out, t, cnf_or(cnf_and(a, cnf_not(b)), cnf_and(cnf_not(a), b)));
      }
      return out;
    }
    case Expr::Kind::Rename: {
      SymRel in = sym_eval(e->left, db, guess, universe);
      if (e->new_names.size() != in.schema.size()) throw Error("rename: arity mismatch");
      in.schema = e->new_names;
      return in;
    }
    default:
      throw Error("fragment grounding: unsupported operator in PHI");
  }
}

// ---- structural fragment matchers ----

bool is_dom1(const ExprPtr& e) { return e->kind == Expr::Kind::DomPower && e->power == 1; }

bool is_dom_pair(const ExprPtr& e) {
  if (e->kind == Expr::Kind::DomPower && e->power == 2) return true;
  return e->kind == Expr::Kind::Product && is_dom1(e->left) && is_dom1(e->right);
}

bool only_declared_guess(const ExprPtr& e, const std::string& name) {
  std::set<std::string> gs;
  collect_guessed(e, gs);
  for (const auto& g : gs)
    if (g != name) return false;
  return true;
}

struct EaaShape {
  ExprPtr phi;
  std::vector<std::string> proj;  // empty: PHI is already the pair relation
};

std::optional<EaaShape> match_eaa(const NpAlgQuery& q) {
  if (q.guesses.size() != 1 || !q.lets.empty() || !q.fail) return std::nullopt;
  if (q.fail->kind != Expr::Kind::Difference || !is_dom_pair(q.fail->left)) return std::nullopt;
  ExprPtr rhs = q.fail->right;
  EaaShape s;
  if (rhs->kind == Expr::Kind::Project && !rhs->implicit_proj && rhs->attrs.size() == 2) {
    s.proj = rhs->attrs;
    rhs = rhs->left;
  }
  if (!q_free(rhs) || !only_declared_guess(rhs, q.guesses[0].name)) return std::nullopt;
  s.phi = rhs;
  return s;
}

struct E1Shape {
  ExprPtr phi;
};

/// Matches DOM - pi(DOM x E), returning E.
ExprPtr match_empty_test(const ExprPtr& f) {
  if (f->kind != Expr::Kind::Difference || !is_dom1(f->left)) return nullptr;
  const ExprPtr& p = f->right;
  if (p->kind != Expr::Kind::Project || p->attrs.size() != 1 || p->attrs[0] != "$1")
    return nullptr;
  const ExprPtr& prod = p->left;
  if (prod->kind != Expr::Kind::Product || !is_dom1(prod->left)) return nullptr;
  return prod->right;
}

std::optional<E1Shape> match_e1(const NpAlgQuery& q) {
  if (q.guesses.size() != 1 || q.guesses[0].arity != 1 || !q.fail) return std::nullopt;
  ExprPtr body = match_empty_test(q.fail);
  if (!body) return std::nullopt;
  if (q.lets.size() == 1 && body->kind == Expr::Kind::Base && body->name == q.lets[0].first)
    body = q.lets[0].second;
  else if (!q.lets.empty())
    return std::nullopt;
  if (body->kind != Expr::Kind::Divide) return std::nullopt;
  ExprPtr divisor = body->right;
  if (divisor->kind == Expr::Kind::Rename && divisor->new_names.size() == 2)
    divisor = divisor->left;
  if (!is_dom_pair(divisor)) return std::nullopt;
  if (!q_free(body->left) || !only_declared_guess(body->left, q.guesses[0].name))
    return std::nullopt;
  return E1Shape{body->left};
}

// ---- grounding ----

struct Grounder {
  TwoSatInstance inst;
  bool unsat = false;

  void emit(const Cnf& fn) {
    if (fn.is_false) {
      unsat = true;
      return;
    }
    for (const auto& c : fn.clauses) {
      if (c.empty()) {
        unsat = true;
      } else if (c.size() == 1) {
        TwoSatLit l{std::abs(c[0]) - 1, c[0] < 0};
        inst.clauses.emplace_back(l, l);
      } else if (c.size() == 2) {
        inst.clauses.emplace_back(TwoSatLit{std::abs(c[0]) - 1, c[0] < 0},
                                  TwoSatLit{std::abs(c[1]) - 1, c[1] < 0});
      } else {
        throw Error("fragment grounding: condition over more than two guessed tuples");
      }
    }
  }

  TwoSatInstance finish() {
    if (inst.num_vars < 1) inst.num_vars = 1;
    if (unsat) {
      inst.clauses.emplace_back(TwoSatLit{0, false}, TwoSatLit{0, false});
      inst.clauses.emplace_back(TwoSatLit{0, true}, TwoSatLit{0, true});
    }
    return inst;
  }
};

std::vector<Constant> dom_values(const Database& db) {
  std::vector<Constant> out;
  for (const auto& t : db.dom().tuples()) out.push_back(t[0]);
  return out;
}

const Cnf& row_condition(const SymRel& r, const Tuple& t) {
  static const Cnf kFalse = cnf_false();
  auto it = r.rows.find(t);
  return it == r.rows.end() ? kFalse : it->second;
}

}  // namespace

FragmentClass classify(const NpAlgQuery& query) {
  if (auto s = match_eaa(query)) {
    FragmentClass f;
    f.tag = FragmentClass::Tag::Eaa;
    f.detail = "single guess " + query.guesses[0].name + "^(" +
               std::to_string(query.guesses[0].arity) + "), FAIL = DOM x DOM - " +
               (s->proj.empty() ? "PHI" : "pi(PHI)") + " with PHI q-free";
    return f;
  }
  if (match_e1(query)) {
    FragmentClass f;
    f.tag = FragmentClass::Tag::E1eStarAa;
    f.detail = "single unary guess " + query.guesses[0].name +
               ", X = PHI / DOM x DOM, FAIL = emptiness test on X";
    return f;
  }
  return {FragmentClass::Tag::General, "no fragment shape matched"};
}

TwoSatInstance to_2sat(const NpAlgQuery& query, const Database& db) {
  auto vals = dom_values(db);

  if (auto s = match_eaa(query)) {
    auto universe = guess_universe(db, query.guesses[0].arity);
    Grounder g;
    g.inst.num_vars = std::max<int>(static_cast<int>(universe.size()), 1);
    if (vals.empty()) return g.finish();  // FAIL is trivially empty
    SymRel phi = sym_eval(s->phi, db, query.guesses[0].name, universe);
    if (!s->proj.empty()) {
      Relation probe(phi.schema);
      std::vector<std::size_t> cols = {probe.resolve(s->proj[0]), probe.resolve(s->proj[1])};
      SymRel proj;
      proj.schema = {phi.schema[cols[0]], phi.schema[cols[1]]};
      for (const auto& [t, fn] : phi.rows) sym_insert(proj, {t[cols[0]], t[cols[1]]}, fn);
      phi = std::move(proj);
    }
    if (phi.schema.size() != 2)
      throw Error("fragment grounding: PHI must have exactly two attributes");
    for (const auto& a : vals)
      for (const auto& b : vals) g.emit(row_condition(phi, {a, b}));
    return g.finish();
  }

  if (auto s = match_e1(query)) {
    auto universe = guess_universe(db, 1);
    if (vals.empty()) {
      Grounder g;
      return g.finish();  // empty(X) is trivially empty when DOM is
    }
    SymRel phi = sym_eval(s->phi, db, query.guesses[0].name, universe);
    if (phi.schema.size() < 3)
      throw Error("fragment grounding: PHI must have at least three attributes");
    int k = static_cast<int>(phi.schema.size()) - 2;

    // One candidate instance per grounding of the divided columns; the query
    // holds iff some candidate is satisfiable, so return the first such (or
    // the final unsatisfiable one).
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    TwoSatInstance last;
    while (true) {
      Grounder g;
      g.inst.num_vars = static_cast<int>(universe.size());
      Tuple xbar;
      for (auto i : idx) xbar.push_back(vals[i]);
      for (const auto& a : vals)
        for (const auto& b : vals) {
          Tuple t = xbar;
          t.push_back(a);
          t.push_back(b);
          g.emit(row_condition(phi, t));
        }
      last = g.finish();
      if (solve_2sat(last)) return last;
      int pos = k - 1;
      while (pos >= 0) {
        if (++idx[static_cast<std::size_t>(pos)] < vals.size()) break;
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) return last;
    }
  }

  throw Error("query is not in a polynomial fragment");
}

std::optional<std::vector<bool>> solve_2sat(const TwoSatInstance& inst) {
  int n = inst.num_vars;
  if (n == 0) return std::vector<bool>{};
  auto node = [](const TwoSatLit& l) { return 2 * l.var + (l.negated ? 1 : 0); };
  std::vector<std::vector<int>> adj(2 * static_cast<std::size_t>(n));
  for (const auto& [a, b] : inst.clauses) {
    if (a.var < 0 || a.var >= n || b.var < 0 || b.var >= n)
      throw Error("2SAT: literal out of range");
    adj[node(a) ^ 1].push_back(node(b));
    adj[node(b) ^ 1].push_back(node(a));
  }

  // Iterative Tarjan; components are numbered in reverse topological order.
  int total = 2 * n;
  std::vector<int> index(total, -1), low(total, 0), comp(total, -1), stck;
  std::vector<bool> on_stack(total, false);
  int next_index = 0, next_comp = 0;
  struct Frame {
    int u;
    std::size_t child = 0;
  };
  for (int start = 0; start < total; ++start) {
    if (index[start] != -1) continue;
    std::vector<Frame> frames = {{start}};
    while (!frames.empty()) {
      Frame& f = frames.back();
      int u = f.u;
      if (f.child == 0) {
        index[u] = low[u] = next_index++;
        stck.push_back(u);
        on_stack[u] = true;
      }
      bool descended = false;
      while (f.child < adj[u].size()) {
        int v = adj[u][f.child++];
        if (index[v] == -1) {
          frames.push_back({v});
          descended = true;
          break;
        }
        if (on_stack[v]) low[u] = std::min(low[u], index[v]);
      }
      if (descended) continue;
      if (low[u] == index[u]) {
        while (true) {
          int w = stck.back();
          stck.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
          if (w == u) break;
        }
        ++next_comp;
      }
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().u;
        low[parent] = std::min(low[parent], low[u]);
      }
    }
  }

  std::vector<bool> assignment(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    if (comp[2 * v] == comp[2 * v + 1]) return std::nullopt;
    assignment[static_cast<std::size_t>(v)] = comp[2 * v] < comp[2 * v + 1];
  }
  return assignment;
}

PolyResult solve_poly(const NpAlgQuery& query, const Database& db) {
  auto inst = to_2sat(query, db);
  auto assignment = solve_2sat(inst);
  PolyResult res;
  res.satisfiable = assignment.has_value();
  if (!res.satisfiable) return res;

  auto universe = guess_universe(db, query.guesses[0].arity);
  Relation rel(power_schema(query.guesses[0].arity));
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (i < assignment->size() && (*assignment)[i]) rel.insert(universe[i]);
  Witness w;
  w[query.guesses[0].name] = std::move(rel);
  res.witness = std::move(w);
  return res;
}

}  // namespace npalg
