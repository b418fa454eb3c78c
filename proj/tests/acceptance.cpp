// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "npalg/circuit.hpp"
#include "npalg/fixtures.hpp"
#include "npalg/fo.hpp"
#include "npalg/localsearch.hpp"
#include "npalg/polyfrag.hpp"
#include "npalg/runner.hpp"
#include "npalg/sample_queries.hpp"
#include "npalg/sugar.hpp"
#include "npalg/textio.hpp"

using namespace npalg;
namespace fs = std::filesystem;

namespace {

int g_fails = 0;

#define VERIFY(cond)                                                                     \
  do {                                                                                   \
    if (!(cond)) {                                                                       \
      ++g_fails;                                                                         \
      if (g_fails <= 8) std::cerr << "    failed: " #cond " (line " << __LINE__ << ")\n"; \
    }                                                                                    \
  } while (0)

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

Constant I(std::int64_t v) { return Constant::integer(v); }

std::vector<std::string> dollar_schema(int k) {
  std::vector<std::string> s;
  for (int i = 1; i <= k; ++i) s.push_back("$" + std::to_string(i));
  return s;
}

Relation make_rel(int arity, const std::set<Tuple>& ts) {
  Relation r(dollar_schema(arity));
  for (const auto& t : ts) r.insert(t);
  return r;
}

std::set<Tuple> subset_of(const std::vector<Tuple>& universe, std::uint64_t mask) {
  std::set<Tuple> out;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask & (1ull << i)) out.insert(universe[i]);
  return out;
}

/// Database whose active domain is exactly {1..m}, plus extra relations.
Database db_with(int m, std::map<std::string, Relation> rels) {
  Relation full({"$1"});
  for (int v = 1; v <= m; ++v) full.insert({I(v)});
  rels["FULL"] = std::move(full);
  return Database(std::move(rels));
}

Database graph_db(int nodes, const std::vector<std::pair<int, int>>& edges) {
  std::map<std::string, Relation> rels;
  Relation n({"n"});
  for (int v = 1; v <= nodes; ++v) n.insert({I(v)});
  Relation e({"f", "t"});
  for (auto [a, b] : edges) e.insert({I(a), I(b)});
  rels["NODES"] = std::move(n);
  rels["EDGES"] = std::move(e);
  return Database(std::move(rels));
}

const fs::path kRoot = FIXTURES_DIR;

std::string slurp(const fs::path& rel) {
  std::ifstream in(kRoot / rel);
  if (!in.good()) throw Error("missing fixture file: " + rel.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ===========================================================================
// 1. Paper-instance regression.
// ===========================================================================
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  Database db = graph_db(4, {{1, 2}, {1, 4}, {2, 3}});
  NpAlgQuery q = samples::k_coloring(3);
  Witness w;
  w["Q1"] = make_rel(1, {{I(2)}, {I(4)}});
  w["Q2"] = make_rel(1, {{I(1)}});
  w["Q3"] = make_rel(1, {{I(3)}});
  VERIFY(evaluate_in_query(q, q.fail, db, w).empty());
  VERIFY(check(q, db, w));

  SolveResult exact = solve_exact(q, db);
  VERIFY(exact.found());
  VERIFY(exact.witness && check(q, db, *exact.witness));

  runner::SolveFlags flags;
  flags.solver = "hill";
  flags.seed = 0;
  runner::RunReport hill = runner::run_query(q, db, flags);  // re-validated internally
  VERIFY(hill.answer);
  VERIFY(ms_since(t0) < 1000.0);
}

// ===========================================================================
// 2. Exact-semantics counting.
// ===========================================================================
void criterion2() {
  Database db = db_with(2, {});
  for (int arity : {1, 2}) {
    NpAlgQuery q;
    q.guesses.push_back({"Q", arity});
    q.fail = expr::dom();  // DOM is nonempty, so no extension ever succeeds
    SolveResult res = solve_exact(q, db);
    std::uint64_t expected = arity == 1 ? 4 : 16;
    VERIFY(res.status == SolveResult::Status::NoSolution);
    VERIFY(res.examined == expected);
    VERIFY(count_extensions(q.guesses[0], db) == expected);
  }
}

// ===========================================================================
// 3. Sugar oracle suite (brute-force predicates as in the unit tests).
// ===========================================================================
namespace sugar_oracles {

bool partition(const std::set<Tuple>& n, const std::vector<std::set<Tuple>>& parts) {
  std::set<Tuple> uni;
  std::size_t total = 0;
  for (const auto& p : parts) {
    total += p.size();
    uni.insert(p.begin(), p.end());
  }
  return total == uni.size() && uni == n;
}

struct FunPieces {
  std::map<Tuple, std::set<Tuple>> image, preimage;
  std::set<Tuple> dom_side, range_side;
};

FunPieces split(const std::set<Tuple>& fun, int d) {
  FunPieces f;
  for (const auto& t : fun) {
    Tuple x(t.begin(), t.begin() + d), y(t.begin() + d, t.end());
    f.image[x].insert(y);
    f.preimage[y].insert(x);
    f.dom_side.insert(x);
    f.range_side.insert(y);
  }
  return f;
}

bool function(const std::set<Tuple>& fun, const std::set<Tuple>& d_rel,
              const std::set<Tuple>& r_rel, int d) {
  auto f = split(fun, d);
  for (const auto& [x, ys] : f.image)
    if (ys.size() > 1 || !d_rel.count(x)) return false;
  for (const auto& y : f.range_side)
    if (!r_rel.count(y)) return false;
  return true;
}

bool total(const std::set<Tuple>& fun, const std::set<Tuple>& d_rel, int d) {
  auto f = split(fun, d);
  for (const auto& x : d_rel)
    if (!f.dom_side.count(x)) return false;
  return true;
}

bool surjective(const std::set<Tuple>& fun, const std::set<Tuple>& r_rel, int d) {
  auto f = split(fun, d);
  for (const auto& y : r_rel)
    if (!f.range_side.count(y)) return false;
  return true;
}

bool injective(const std::set<Tuple>& fun, int d) {
  auto f = split(fun, d);
  for (const auto& [y, xs] : f.preimage)
    if (xs.size() > 1) return false;
  return true;
}

bool permutation(const std::set<Tuple>& perm, const std::set<Tuple>& n) {
  std::vector<Tuple> elems(n.begin(), n.end());
  std::vector<Tuple> img = elems;
  do {
    std::set<Tuple> want;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      Tuple t = elems[i];
      t.insert(t.end(), img[i].begin(), img[i].end());
      want.insert(t);
    }
    if (want == perm) return true;
  } while (std::next_permutation(img.begin(), img.end()));
  return false;
}

bool successor(const std::set<Tuple>& succ, const std::set<Tuple>& n) {
  if (n.size() <= 1) return succ.empty();
  std::vector<Tuple> ord(n.begin(), n.end());
  do {
    std::set<Tuple> want;
    for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
      Tuple t = ord[i];
      t.insert(t.end(), ord[i + 1].begin(), ord[i + 1].end());
      want.insert(t);
    }
    if (want == succ) return true;
  } while (std::next_permutation(ord.begin(), ord.end()));
  return false;
}

}  // namespace sugar_oracles

void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  auto dom1 = guess_universe(db_with(3, {}), 1);
  auto pairs = guess_universe(db_with(3, {}), 2);

  // complement + emptiness test, both arities, exhaustive.
  for (std::uint64_t m = 0; m < 8; ++m) {
    auto rset = subset_of(dom1, m);
    auto db = db_with(3, {{"R", make_rel(1, rset)}});
    auto comp = evaluate(sugar::complement(expr::base("R"), 1), db);
    std::set<Tuple> want;
    for (const auto& t : dom1)
      if (!rset.count(t)) want.insert(t);
    VERIFY(comp.tuples() == want);
    VERIFY(evaluate(sugar::empty_test(expr::base("R")), db).empty() == !rset.empty());
  }
  for (std::uint64_t m = 0; m < (1ull << 9); ++m) {
    auto rset = subset_of(pairs, m);
    auto db = db_with(3, {{"R", make_rel(2, rset)}});
    auto comp = evaluate(sugar::complement(expr::base("R"), 2), db);
    VERIFY(comp.size() == 9 - rset.size());
    VERIFY(evaluate(sugar::empty_test(expr::base("R")), db).empty() == !rset.empty());
  }

  // Partition into 2 and 3 parts, exhaustive.
  for (std::uint64_t nm = 0; nm < 8; ++nm)
    for (std::uint64_t m1 = 0; m1 < 8; ++m1)
      for (std::uint64_t m2 = 0; m2 < 8; ++m2) {
        auto nset = subset_of(dom1, nm);
        auto p1 = subset_of(dom1, m1);
        auto p2 = subset_of(dom1, m2);
        auto db = db_with(3, {{"NS", make_rel(1, nset)},
                              {"P1", make_rel(1, p1)},
                              {"P2", make_rel(1, p2)}});
        auto two = sugar::fail_partition(expr::base("NS"),
                                         {expr::base("P1"), expr::base("P2")}, 1);
        VERIFY(evaluate(two, db).empty() == sugar_oracles::partition(nset, {p1, p2}));
        for (std::uint64_t m3 = 0; m3 < 8; ++m3) {
          auto p3 = subset_of(dom1, m3);
          auto db3 = db_with(3, {{"NS", make_rel(1, nset)},
                                 {"P1", make_rel(1, p1)},
                                 {"P2", make_rel(1, p2)},
                                 {"P3", make_rel(1, p3)}});
          auto three = sugar::fail_partition(
              expr::base("NS"), {expr::base("P1"), expr::base("P2"), expr::base("P3")}, 1);
          VERIFY(evaluate(three, db3).empty() ==
                 sugar_oracles::partition(nset, {p1, p2, p3}));
        }
      }

  // Function family, all four kinds, exhaustive (2^9 * 2^3 * 2^3 configs).
  for (std::uint64_t fm = 0; fm < (1ull << 9); ++fm)
    for (std::uint64_t dm = 0; dm < 8; ++dm)
      for (std::uint64_t rm = 0; rm < 8; ++rm) {
        auto fun = subset_of(pairs, fm);
        auto dset = subset_of(dom1, dm);
        auto rset = subset_of(dom1, rm);
        auto db = db_with(3, {{"FUN", make_rel(2, fun)},
                              {"DS", make_rel(1, dset)},
                              {"RS", make_rel(1, rset)}});
        auto run = [&](sugar::FunctionKind kind) {
          return evaluate(sugar::fail_function_family(kind, expr::base("FUN"),
                                                      expr::base("DS"), expr::base("RS"), 1, 1),
                          db)
              .empty();
        };
        VERIFY(run(sugar::FunctionKind::Function) ==
               sugar_oracles::function(fun, dset, rset, 1));
        VERIFY(run(sugar::FunctionKind::Total) == sugar_oracles::total(fun, dset, 1));
        VERIFY(run(sugar::FunctionKind::Surjective) ==
               sugar_oracles::surjective(fun, rset, 1));
        VERIFY(run(sugar::FunctionKind::Injective) == sugar_oracles::injective(fun, 1));
      }

  // Size comparisons, exhaustive over unary set pairs.
  for (std::uint64_t nm = 0; nm < 8; ++nm)
    for (std::uint64_t km = 0; km < 8; ++km) {
      auto nset = subset_of(dom1, nm);
      auto kset = subset_of(dom1, km);
      auto db = db_with(3, {{"NS", make_rel(1, nset)}, {"KS", make_rel(1, kset)}});
      auto solvable = [&](sugar::SizeCmp kind) {
        NpAlgQuery q;
        q.guesses = {{"AUX", 2}};
        q.fail = sugar::fail_size_cmp(kind, "AUX", expr::base("NS"), expr::base("KS"), 1, 1);
        return solve_exact(q, db).found();
      };
      VERIFY(solvable(sugar::SizeCmp::Geq) == (nset.size() >= kset.size()));
      VERIFY(solvable(sugar::SizeCmp::Leq) == (nset.size() <= kset.size()));
      VERIFY(solvable(sugar::SizeCmp::Eq) == (nset.size() == kset.size()));
    }

  // Permutation test, exhaustive over perm x set.
  for (std::uint64_t pm = 0; pm < (1ull << 9); ++pm)
    for (std::uint64_t nm = 0; nm < 8; ++nm) {
      auto perm = subset_of(pairs, pm);
      auto nset = subset_of(dom1, nm);
      auto db = db_with(3, {{"NS", make_rel(1, nset)}});
      Extensions ext = {{"PERM", make_rel(2, perm)}};
      auto fail = sugar::fail_permutation("PERM", expr::base("NS"), 1);
      VERIFY(evaluate(fail, db, ext).empty() == sugar_oracles::permutation(perm, nset));
    }

  // Successor test: exhaustive over a 2-element domain; sampled over 3 (the
  // check quantifies over 2^9 auxiliary orders per configuration, putting
  // the full product beyond the exhaustive budget).
  auto succ_solvable = [](int m, const std::set<Tuple>& nset, const std::set<Tuple>& succ) {
    auto db = db_with(m, {{"NS", make_rel(1, nset)}});
    NpAlgQuery q;
    q.guesses = {{"SUCC", 2}, {"ORD", 2}};
    q.fail = sugar::fail_successor("SUCC", "ORD", expr::base("NS"), 1);
    SolveOptions opts;
    opts.fixed["SUCC"] = make_rel(2, succ);
    return solve_exact(q, db, opts).found();
  };
  auto pairs2 = guess_universe(db_with(2, {}), 2);
  auto dom2 = guess_universe(db_with(2, {}), 1);
  for (std::uint64_t sm = 0; sm < 16; ++sm)
    for (std::uint64_t nm = 0; nm < 4; ++nm) {
      auto succ = subset_of(pairs2, sm);
      auto nset = subset_of(dom2, nm);
      VERIFY(succ_solvable(2, nset, succ) == sugar_oracles::successor(succ, nset));
    }
  Rng rng(303);
  for (int i = 0; i < 1000; ++i) {
    auto succ = subset_of(pairs, rng.below(1ull << 9));
    auto nset = subset_of(dom1, rng.below(8));
    VERIFY(succ_solvable(3, nset, succ) == sugar_oracles::successor(succ, nset));
  }

  VERIFY(ms_since(t0) < 60000.0);
}

// ===========================================================================
// 4. Polynomial-fragment equivalence.
// ===========================================================================
void criterion4() {
  auto agree = [](const NpAlgQuery& q, const Database& db) {
    PolyResult poly = solve_poly(q, db);
    bool exact = solve_exact(q, db).found();
    VERIFY(poly.satisfiable == exact);
    if (poly.satisfiable) VERIFY(poly.witness && check(q, db, *poly.witness));
  };
  auto db_from_mask = [](int n, std::uint64_t mask) {
    // Symmetric graphs: one bit per unordered pair, both directions stored.
    std::vector<std::pair<int, int>> edges;
    int bit = 0;
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b, ++bit)
        if (mask & (1ull << bit)) {
          edges.emplace_back(a, b);
          edges.emplace_back(b, a);
        }
    return graph_db(n, edges);
  };

  for (int n = 2; n <= 4; ++n) {
    int pairs = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (1ull << pairs); ++mask) {
      Database db = db_from_mask(n, mask);
      agree(samples::two_coloring(), db);
      agree(samples::two_partition_cliques(), db);
    }
  }
  Rng rng(404);
  for (int i = 0; i < 200; ++i) {
    int n = 5 + static_cast<int>(rng.below(2));
    int pairs = n * (n - 1) / 2;
    Database db = db_from_mask(n, rng.below(1ull << pairs));
    agree(samples::two_coloring(), db);
    agree(samples::two_partition_cliques(), db);
  }

  // Polynomial-time claim at scale: a 100-node random bipartite graph, where
  // enumeration (2^100 extensions) is impossible.
  {
    Rng brng(505);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 300; ++i) {
      int a = 1 + static_cast<int>(brng.below(50));
      int b = 51 + static_cast<int>(brng.below(50));
      edges.emplace_back(a, b);
      edges.emplace_back(b, a);
    }
    Database big = graph_db(100, edges);
    auto t0 = std::chrono::steady_clock::now();
    PolyResult res = solve_poly(samples::two_coloring(), big);
    double ms = ms_since(t0);
    VERIFY(res.satisfiable);
    VERIFY(res.witness && check(samples::two_coloring(), big, *res.witness));
    VERIFY(ms < 1000.0);
  }
}

// ===========================================================================
// 5. Translation fidelity.
// ===========================================================================
namespace fo_oracle {

using Assignment = std::map<std::string, Constant>;

bool eval(const FoPtr& f, const Database& db, const Extensions& ext, const Assignment& nu) {
  auto value = [&](const FoTerm& t) { return t.is_var ? nu.at(t.var) : t.value; };
  switch (f->kind) {
    case FoFormula::Kind::Atom: {
      Tuple t;
      for (const auto& a : f->args) t.push_back(value(a));
      auto it = ext.find(f->predicate);
      const Relation& r = it != ext.end() ? it->second : db.relation(f->predicate);
      return r.contains(t);
    }
    case FoFormula::Kind::Equality:
      return value(f->args[0]) == value(f->args[1]);
    case FoFormula::Kind::And:
      return eval(f->a, db, ext, nu) && eval(f->b, db, ext, nu);
    case FoFormula::Kind::Or:
      return eval(f->a, db, ext, nu) || eval(f->b, db, ext, nu);
    case FoFormula::Kind::Not:
      return !eval(f->a, db, ext, nu);
  }
  return false;
}

std::vector<Assignment> assignments(const Database& db, const std::vector<std::string>& vars) {
  std::vector<Constant> vals;
  for (const auto& t : db.dom().tuples()) vals.push_back(t[0]);
  std::vector<Assignment> out = {{}};
  for (const auto& v : vars) {
    std::vector<Assignment> next;
    for (const auto& a : out)
      for (const auto& c : vals) {
        Assignment b = a;
        b.emplace(v, c);
        next.push_back(std::move(b));
      }
    out = std::move(next);
  }
  return out;
}

FoTerm V(const std::string& v) { return FoTerm::variable(v); }

/// Random quantifier-free formula with at most `atoms` leaves.
FoPtr random_formula(Rng& rng, const std::vector<std::string>& vs, int atoms) {
  auto term = [&](bool force_var) {
    if (force_var || rng.below(4) < 3) return V(vs[rng.below(vs.size())]);
    return FoTerm::constant(I(1 + static_cast<std::int64_t>(rng.below(3))));
  };
  if (atoms <= 1 || rng.below(3) == 0) {
    if (rng.below(3) == 0) return fo::equals(term(true), term(false));
    if (rng.below(2) == 0) return fo::atom("P", {term(true)});
    bool var_first = rng.below(2) == 0;
    return fo::atom("E", {term(var_first), term(!var_first)});
  }
  switch (rng.below(3)) {
    case 0:
      return fo::conj(random_formula(rng, vs, atoms / 2),
                      random_formula(rng, vs, atoms - atoms / 2));
    case 1:
      return fo::disj(random_formula(rng, vs, atoms / 2),
                      random_formula(rng, vs, atoms - atoms / 2));
    default:
      return fo::neg(random_formula(rng, vs, atoms - 1));
  }
}

Database random_db(Rng& rng, int m) {
  std::map<std::string, Relation> rels;
  Relation p({"$1"});
  for (std::int64_t v = 1; v <= m; ++v)
    if (rng.below(2)) p.insert({I(v)});
  rels["P"] = std::move(p);
  Relation e({"$1", "$2"});
  for (std::int64_t a = 1; a <= m; ++a)
    for (std::int64_t b = 1; b <= m; ++b)
      if (rng.below(2)) e.insert({I(a), I(b)});
  rels["E"] = std::move(e);
  return db_with(m, std::move(rels));
}

bool eso_check(const EsoSentence& s, const Database& db) {
  std::vector<Constant> vals;
  for (const auto& t : db.dom().tuples()) vals.push_back(t[0]);
  for (std::uint64_t mask = 0; mask < (1ull << vals.size()); ++mask) {
    Relation c({"$1"});
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (mask & (1ull << i)) c.insert({vals[i]});
    Extensions ext = {{s.second_order[0].name, c}};
    bool all = true;
    for (const auto& xa : assignments(db, s.universal_vars)) {
      bool some = false;
      for (const auto& ya : assignments(db, s.existential_vars)) {
        Assignment nu = xa;
        nu.insert(ya.begin(), ya.end());
        if (eval(s.matrix, db, ext, nu)) {
          some = true;
          break;
        }
      }
      if (!some) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace fo_oracle

void criterion5() {
  std::vector<std::string> pool = {"X", "Y", "Z"};
  Rng rng(606);
  for (int iter = 0; iter < 500; ++iter) {
    int m = 2 + static_cast<int>(rng.below(2));  // |DOM| in {2, 3}
    Database db = fo_oracle::random_db(rng, m);
    FoPtr f = fo_oracle::random_formula(rng, pool, 3);
    Vocabulary vocab;
    for (const auto& [name, rel] : db.relations())
      vocab[name] = {static_cast<int>(rel.arity()), false};
    ExprPtr e = translate_fo(f, vocab);
    VERIFY(q_free(e));
    Relation rel = evaluate(e, db);
    auto fv = fo::free_vars(f);
    for (const auto& nu : fo_oracle::assignments(db, fv)) {
      Tuple t;
      for (const auto& v : fv) t.push_back(nu.at(v));
      VERIFY(rel.contains(t) == fo_oracle::eval(f, db, {}, nu));
    }
  }

  std::vector<std::string> uv = {"U", "V"};
  Rng rng2(707);
  for (int iter = 0; iter < 100; ++iter) {
    Database db = fo_oracle::random_db(rng2, 3);
    FoPtr f = fo_oracle::random_formula(rng2, uv, 2);
    f = rng2.below(2) ? fo::conj(f, fo::atom("CG", {fo_oracle::V(uv[rng2.below(2)])}))
                      : fo::disj(f, fo::neg(fo::atom("CG", {fo_oracle::V(uv[rng2.below(2)])})));
    EsoSentence s;
    s.second_order = {{"CG", 1}};
    s.matrix = f;
    switch (rng2.below(3)) {
      case 0: s.universal_vars = {"U", "V"}; break;
      case 1:
        s.universal_vars = {"U"};
        s.existential_vars = {"V"};
        break;
      default: s.existential_vars = {"U", "V"}; break;
    }
    NpAlgQuery q = build_psi(s, db);
    SolveResult res = solve_exact(q, db);
    VERIFY(res.found() == fo_oracle::eso_check(s, db));
    if (res.found()) VERIFY(check(q, db, *res.witness));
  }
}

// ===========================================================================
// 6. Succinct-circuit pipeline.
// ===========================================================================
namespace circuits {

struct Builder {
  Circuit c;
  explicit Builder(int n) { c.n = n; }
  int in() {
    c.gates.push_back({Gate::Kind::In, 0, 0});
    return static_cast<int>(c.gates.size());
  }
  int gnot(int a) {
    c.gates.push_back({Gate::Kind::Not, a, a});
    return static_cast<int>(c.gates.size());
  }
  int gand(int a, int b) {
    c.gates.push_back({Gate::Kind::And, a, b});
    return static_cast<int>(c.gates.size());
  }
  int gor(int a, int b) {
    c.gates.push_back({Gate::Kind::Or, a, b});
    return static_cast<int>(c.gates.size());
  }
};

Circuit minterm(int n, const std::set<std::uint64_t>& accepted) {
  Builder b(n);
  int w = 2 * n;
  std::vector<int> ins, negs;
  for (int i = 0; i < w; ++i) ins.push_back(b.in());
  for (int i = 0; i < w; ++i) negs.push_back(b.gnot(ins[i]));
  int acc = 0;
  for (auto pat : accepted) {
    int term = 0;
    for (int i = 0; i < w; ++i) {
      int lit = (pat >> (w - 1 - i)) & 1 ? ins[i] : negs[i];
      term = term == 0 ? lit : b.gand(term, lit);
    }
    acc = acc == 0 ? term : b.gor(acc, term);
  }
  if (acc == 0) b.gand(ins[0], negs[0]);
  return b.c;
}

std::vector<bool> pattern_bits(std::uint64_t pat, int w) {
  std::vector<bool> bits(w);
  for (int i = 0; i < w; ++i) bits[i] = (pat >> (w - 1 - i)) & 1;
  return bits;
}

bool explicit_3colorable(const Circuit& c) {
  int nodes = 1 << c.n;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < nodes; ++u)
    for (int v = 0; v < nodes; ++v) {
      std::uint64_t pat = (static_cast<std::uint64_t>(u) << c.n) | v;
      if (eval_circuit(c, pattern_bits(pat, 2 * c.n))) edges.emplace_back(u, v);
    }
  std::vector<int> color(nodes, 0);
  std::uint64_t total = 1;
  for (int i = 0; i < nodes; ++i) total *= 3;
  for (std::uint64_t enc = 0; enc < total; ++enc) {
    std::uint64_t e = enc;
    for (int i = 0; i < nodes; ++i) {
      color[i] = static_cast<int>(e % 3);
      e /= 3;
    }
    bool ok = true;
    for (auto [u, v] : edges)
      if (color[u] == color[v]) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

}  // namespace circuits

void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  auto pipeline = [&](const Circuit& c) {
    Database db = succinct_db();
    NpAlgQuery q = gen_succinct_3col(c);
    auto forced = forced_gate_extension(c);

    // FAIL_CIRCUIT is exactly empty under the forced extension...
    Witness w = forced;
    for (int i = 1; i <= 3; ++i) w["COL" + std::to_string(i)] = make_rel(c.n, {});
    Relation fc = evaluate_in_query(q, expr::base("FAIL_CIRCUIT"), db, w);
    VERIFY(fc.empty());

    // ...and any single-tuple perturbation of any gate relation breaks it.
    std::vector<Tuple> patterns = guess_universe(db, 2 * c.n);
    std::vector<Tuple> bits;
    for (const auto& t : patterns) {
      bool binary = true;
      for (const auto& v : t)
        if (!(v == I(0) || v == I(1))) binary = false;
      if (binary) bits.push_back(t);
    }
    for (auto& [gname, grel] : forced) {
      for (const auto& t : bits) {
        Witness pert = w;
        Relation r = grel;
        if (r.contains(t)) {
          Relation smaller(r.schema());
          for (const auto& u : r.tuples())
            if (u != t) smaller.insert(u);
          r = smaller;
        } else {
          r.insert(t);
        }
        pert[gname] = r;
        VERIFY(!evaluate_in_query(q, expr::base("FAIL_CIRCUIT"), db, pert).empty());
      }
    }

    // Decision equivalence: gates forced, colorings enumerated.
    SolveOptions opts;
    for (auto& [name, rel] : forced) opts.fixed[name] = rel;
    for (int i = 1; i <= 3; ++i) opts.universes["COL" + std::to_string(i)] = bit_universe(c.n);
    bool got = solve_exact(q, db, opts).found();
    VERIFY(got == circuits::explicit_3colorable(c));
  };

  // n = 1: every boolean function of the 2 input bits.
  for (std::uint64_t fn = 0; fn < 16; ++fn) {
    std::set<std::uint64_t> accepted;
    for (std::uint64_t pat = 0; pat < 4; ++pat)
      if (fn & (1ull << pat)) accepted.insert(pat);
    pipeline(circuits::minterm(1, accepted));
  }
  // n = 2: hand-built shapes plus random functions on the 4-node graph.
  {
    pipeline(circuits::minterm(2, {}));                       // no edges
    pipeline(circuits::minterm(2, {0b0001, 0b0100, 0b1110}));  // a few edges
    Rng rng(808);
    for (int i = 0; i < 6; ++i) {
      std::set<std::uint64_t> accepted;
      for (std::uint64_t pat = 0; pat < 16; ++pat)
        if (rng.below(2)) accepted.insert(pat);
      pipeline(circuits::minterm(2, accepted));
    }
  }
  VERIFY(ms_since(t0) < 30000.0);
}

// ===========================================================================
// 7. conSQL end-to-end.
// ===========================================================================
void criterion7() {
  auto t0 = std::chrono::steady_clock::now();

  // The three listings parse, and their printed form re-parses.
  for (const char* f :
       {"graph_coloring.consql", "university_timetabling.consql", "aircraft_landing.consql"}) {
    consql::Specification s = consql::parse_spec(slurp(f));
    std::string printed = consql::print_spec(s);
    VERIFY(consql::print_spec(consql::parse_spec(printed)) == printed);
  }

  // Graph_Coloring solves the worked instance.
  {
    textio::Instance inst = textio::load_instance((kRoot / "corpus/coloring-consql/data").string());
    runner::SolveFlags flags;
    runner::RunReport r = runner::run_spec(slurp("graph_coloring.consql"), inst, flags);
    VERIFY(r.answer);
    VERIFY(r.returns.count("SOLUTION") && r.returns.at("SOLUTION").rows.size() == 4);
  }

  // Timetabling and aircraft toys: tabu (seed 0, restarts 20) reaches the
  // exhaustively verified optimum.
  auto optimum_matches = [&](const std::string& spec_file, const std::string& data_dir) {
    textio::Instance inst = textio::load_instance((kRoot / data_dir).string());
    consql::LowerOptions lopts;
    lopts.keys = inst.keys;
    consql::SearchProblem p =
        consql::lower_spec(consql::parse_spec(slurp(spec_file)), inst.db, lopts);
    VERIFY(p.space_size() <= 10000.0);
    consql::ExhaustiveResult exact = consql::solve_exhaustive(p);
    VERIFY(exact.found);
    localsearch::SolverParams params;
    params.seed = 0;
    params.restarts = 20;
    params.max_iters = 25;
    localsearch::SearchResult tabu = localsearch::tabu_search(p, params);
    VERIFY(tabu.best_cost.violations == 0);
    VERIFY(tabu.best_cost.objective.has_value() && exact.objective.has_value());
    if (tabu.best_cost.objective && exact.objective)
      VERIFY(*tabu.best_cost.objective == *exact.objective);
  };
  optimum_matches("university_timetabling.consql", "corpus/timetabling-consql/data");
  optimum_matches("aircraft_landing.consql", "corpus/aircraft-consql/data");

  VERIFY(ms_since(t0) < 60000.0);
}

// ===========================================================================
// 8. Local-search properties over the full fixture corpus.
// ===========================================================================
void criterion8() {
  for (const auto& f : fixtures::fixtures()) {
    if (f.is_spec()) {
      textio::Instance inst = textio::load_instance((kRoot / f.data_dir).string());
      consql::LowerOptions lopts;
      lopts.keys = inst.keys;
      consql::SearchProblem p =
          consql::lower_spec(consql::parse_spec(slurp(f.input_file)), inst.db, lopts);
      localsearch::SolverParams params;
      params.seed = 0;
      params.restarts = 3;
      params.max_iters = 25;

      // Hill traces are strictly improving.
      localsearch::SearchResult hill = localsearch::hill_climb(p, params);
      bool minimize = !p.spec.objective || p.spec.objective->minimize;
      for (const auto& trace : hill.traces)
        for (std::size_t i = 1; i < trace.size(); ++i)
          VERIFY(localsearch::better_cost(trace[i], trace[i - 1], minimize));

      // Shape validity after every move along a random walk.
      consql::SearchState s = localsearch::initial_state(p, 1);
      Rng rng(909);
      for (int step = 0; step < 25; ++step) {
        auto moves = localsearch::neighborhood(p, s);
        if (moves.empty()) break;
        localsearch::apply_move(p, s, moves[rng.below(moves.size())]);
        for (std::size_t ci = 0; ci < p.components.size(); ++ci) {
          const auto& c = p.components[ci];
          const auto& v = s.comp[ci];
          VERIFY(v.size() == c.rows.size());
          if (c.kind == consql::Component::Kind::Permutation) {
            std::set<int> seen(v.begin(), v.end());
            VERIFY(seen.size() == v.size());
          } else {
            for (int x : v) VERIFY(x >= 0 && static_cast<std::size_t>(x) < c.choices_per_row());
          }
        }
      }

      // Bit-identical results across repeated runs and thread counts.
      localsearch::SearchResult tabu1 = localsearch::tabu_search(p, params);
      localsearch::SearchResult tabu1b = localsearch::tabu_search(p, params);
      localsearch::SolverParams par4 = params;
      par4.threads = 4;
      localsearch::SearchResult tabu4 = localsearch::tabu_search(p, par4);
      VERIFY(tabu1.best == tabu1b.best);
      VERIFY(tabu1.best == tabu4.best);
      VERIFY(tabu1.best_cost.violations == tabu4.best_cost.violations);
    } else {
      textio::Instance inst = textio::load_instance((kRoot / f.data_dir).string());
      NpAlgQuery q = textio::parse_query(slurp(f.input_file));
      runner::SolveFlags flags;
      flags.seed = 0;
      flags.restarts = 3;
      flags.max_iters = 25;
      for (const char* solver : {"hill", "tabu"}) {
        flags.solver = solver;
        runner::RunReport a = runner::run_query(q, inst.db, flags);
        runner::RunReport b = runner::run_query(q, inst.db, flags);
        VERIFY(a.to_json() == b.to_json());
      }
    }
  }
}

struct Criterion {
  const char* title;
  void (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"paper-instance regression (worked witness, exact and hill solvers, < 1 s)", criterion1},
      {"exact-semantics counting (4 and 16 candidate extensions over a 2-constant domain)",
       criterion2},
      {"sugar oracle suite (every kind vs. brute force over |DOM| <= 3, < 60 s)", criterion3},
      {"polynomial-fragment equivalence (exhaustive <= 4 nodes, 200 random 5-6, 100-node "
       "bipartite < 1 s)",
       criterion4},
      {"translation fidelity (500 random formulas, 100 random sentences, zero mismatches)",
       criterion5},
      {"succinct-circuit pipeline (forced gates, perturbations, 3-coloring decisions, < 30 s)",
       criterion6},
      {"specification language end-to-end (three listings, worked instance, toy optima by tabu, "
       "< 60 s)",
       criterion7},
      {"local-search properties (monotone traces, shape validity, bit-identical determinism)",
       criterion8},
  };

  int failed = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    g_fails = 0;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].run();
    } catch (const std::exception& e) {
      ++g_fails;
      std::cerr << "    exception: " << e.what() << "\n";
    }
    bool ok = g_fails == 0;
    if (!ok) ++failed;
    std::cout << "criterion " << (i + 1) << ": " << (ok ? "PASS" : "FAIL") << " - "
              << criteria[i].title << " [" << static_cast<int>(ms_since(t0)) << " ms]"
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
