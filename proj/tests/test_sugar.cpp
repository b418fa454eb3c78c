#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "npalg/guess.hpp"
#include "npalg/sugar.hpp"
#include "test_helpers.hpp"

using namespace npalg;
using namespace npalg::testing;

namespace {

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

/// Database whose active domain is always {1..m}, with extra base relations.
Database db_with(int m, std::map<std::string, Relation> rels) {
  std::vector<std::int64_t> full;
  for (int v = 1; v <= m; ++v) full.push_back(v);
  rels["FULL"] = unary(full);
  return Database(std::move(rels));
}

// ---- independent brute-force predicates ----

bool oracle_partition(const std::set<Tuple>& n, const std::vector<std::set<Tuple>>& parts) {
  std::set<Tuple> uni;
  std::size_t total = 0;
  for (const auto& p : parts) {
    total += p.size();
    uni.insert(p.begin(), p.end());
  }
  return total == uni.size() && uni == n;  // pairwise disjoint and covering
}

struct FunPieces {
  std::map<Tuple, std::set<Tuple>> image;    // domain part -> range parts
  std::map<Tuple, std::set<Tuple>> preimage; // range part -> domain parts
  std::set<Tuple> dom_side, range_side;
};

FunPieces split_fun(const std::set<Tuple>& fun, int d) {
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

bool oracle_function(const std::set<Tuple>& fun, const std::set<Tuple>& d_rel,
                     const std::set<Tuple>& r_rel, int d) {
  auto f = split_fun(fun, d);
  for (const auto& [x, ys] : f.image)
    if (ys.size() > 1 || !d_rel.count(x)) return false;
  for (const auto& y : f.range_side)
    if (!r_rel.count(y)) return false;
  return true;
}

bool oracle_total(const std::set<Tuple>& fun, const std::set<Tuple>& d_rel, int d) {
  auto f = split_fun(fun, d);
  for (const auto& x : d_rel)
    if (!f.dom_side.count(x)) return false;
  return true;
}

bool oracle_surjective(const std::set<Tuple>& fun, const std::set<Tuple>& r_rel, int d) {
  auto f = split_fun(fun, d);
  for (const auto& y : r_rel)
    if (!f.range_side.count(y)) return false;
  return true;
}

bool oracle_injective(const std::set<Tuple>& fun, int d) {
  auto f = split_fun(fun, d);
  for (const auto& [y, xs] : f.preimage)
    if (xs.size() > 1) return false;
  return true;
}

bool oracle_permutation(const std::set<Tuple>& perm, const std::set<Tuple>& n) {
  std::vector<Tuple> elems(n.begin(), n.end());
  std::sort(elems.begin(), elems.end());
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

bool oracle_successor(const std::set<Tuple>& succ, const std::set<Tuple>& n) {
  if (n.size() <= 1) return succ.empty();
  std::vector<Tuple> ord(n.begin(), n.end());
  std::sort(ord.begin(), ord.end());
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

}  // namespace

TEST_CASE("complement equals the domain-power difference") {
  auto pairs = guess_universe(db_with(3, {}), 2);
  REQUIRE(pairs.size() == 9);

  // Unary: every subset of DOM.
  auto dom1 = guess_universe(db_with(3, {}), 1);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    auto rset = subset_of(dom1, mask);
    auto db = db_with(3, {{"R", make_rel(1, rset)}});
    auto got = evaluate(sugar::complement(expr::base("R"), 1), db);
    std::set<Tuple> want;
    for (const auto& t : dom1)
      if (!rset.count(t)) want.insert(t);
    CHECK(got.tuples() == want);
    // Involution.
    auto twice = evaluate(sugar::complement(sugar::complement(expr::base("R"), 1), 1), db);
    CHECK(twice.tuples() == rset);
  }

  // Binary: sampled subsets of DOM^2, plus the two extremes.
  TestRng rng(7);
  std::vector<std::uint64_t> masks = {0, (1ull << 9) - 1};
  for (int i = 0; i < 60; ++i) masks.push_back(rng.below(1ull << 9));
  for (auto mask : masks) {
    auto rset = subset_of(pairs, mask);
    auto db = db_with(3, {{"R", make_rel(2, rset)}});
    auto got = evaluate(sugar::complement(expr::base("R"), 2, {"a", "b"}), db);
    CHECK(got.schema() == std::vector<std::string>{"a", "b"});
    std::set<Tuple> want;
    for (const auto& t : pairs)
      if (!rset.count(t)) want.insert(t);
    CHECK(got.tuples() == want);
  }
}

TEST_CASE("emptiness test flips between DOM and the empty relation") {
  auto dom1 = guess_universe(db_with(3, {}), 1);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    auto rset = subset_of(dom1, mask);
    auto db = db_with(3, {{"R", make_rel(1, rset)}});
    auto got = evaluate(sugar::empty_test(expr::base("R")), db);
    if (rset.empty())
      CHECK(got.tuples() == std::set<Tuple>(dom1.begin(), dom1.end()));
    else
      CHECK(got.empty());
  }
  // Works at any arity of the tested relation.
  auto db = db_with(3, {{"R", binary({{1, 2}})}});
  CHECK(evaluate(sugar::empty_test(expr::base("R")), db).empty());
  auto db2 = db_with(3, {{"R", binary({})}});
  CHECK_FALSE(evaluate(sugar::empty_test(expr::base("R")), db2).empty());
}

TEST_CASE("partition check against a brute-force oracle") {
  auto dom1 = guess_universe(db_with(3, {}), 1);

  SUBCASE("two unary parts, exhaustive") {
    for (std::uint64_t nm = 0; nm < 8; ++nm)
      for (std::uint64_t m1 = 0; m1 < 8; ++m1)
        for (std::uint64_t m2 = 0; m2 < 8; ++m2) {
          auto nset = subset_of(dom1, nm);
          auto p1 = subset_of(dom1, m1);
          auto p2 = subset_of(dom1, m2);
          auto db = db_with(3, {{"NS", make_rel(1, nset)},
                                {"P1", make_rel(1, p1)},
                                {"P2", make_rel(1, p2)}});
          auto fail = sugar::fail_partition(expr::base("NS"),
                                            {expr::base("P1"), expr::base("P2")}, 1);
          CHECK(evaluate(fail, db).empty() == oracle_partition(nset, {p1, p2}));
        }
  }

  SUBCASE("three unary parts, sampled") {
    TestRng rng(11);
    for (int i = 0; i < 300; ++i) {
      auto nset = subset_of(dom1, rng.below(8));
      auto p1 = subset_of(dom1, rng.below(8));
      auto p2 = subset_of(dom1, rng.below(8));
      auto p3 = subset_of(dom1, rng.below(8));
      auto db = db_with(3, {{"NS", make_rel(1, nset)},
                            {"P1", make_rel(1, p1)},
                            {"P2", make_rel(1, p2)},
                            {"P3", make_rel(1, p3)}});
      auto fail = sugar::fail_partition(
          expr::base("NS"), {expr::base("P1"), expr::base("P2"), expr::base("P3")}, 1);
      CHECK(evaluate(fail, db).empty() == oracle_partition(nset, {p1, p2, p3}));
    }
  }

  SUBCASE("binary tuples as elements") {
    std::set<Tuple> nset = {{I(1), I(1)}, {I(2), I(2)}, {I(1), I(2)}};
    std::set<Tuple> p1 = {{I(1), I(1)}};
    std::set<Tuple> p2 = {{I(2), I(2)}, {I(1), I(2)}};
    auto db = db_with(2, {{"NS", make_rel(2, nset)},
                          {"P1", make_rel(2, p1)},
                          {"P2", make_rel(2, p2)}});
    auto fail =
        sugar::fail_partition(expr::base("NS"), {expr::base("P1"), expr::base("P2")}, 2);
    CHECK(evaluate(fail, db).empty());
    // Overlapping parts break it.
    std::set<Tuple> p2bad = p2;
    p2bad.insert(*p1.begin());
    auto db2 = db_with(2, {{"NS", make_rel(2, nset)},
                           {"P1", make_rel(2, p1)},
                           {"P2", make_rel(2, p2bad)}});
    CHECK_FALSE(evaluate(fail, db2).empty());
  }
}

TEST_CASE("function-shape checks against brute-force oracles") {
  auto run = [](int m, const std::set<Tuple>& fun, const std::set<Tuple>& dset,
                const std::set<Tuple>& rset, int d, int r) {
    auto db = db_with(m, {{"FUN", make_rel(d + r, fun)},
                          {"DS", make_rel(d, dset)},
                          {"RS", make_rel(r, rset)}});
    auto build = [&](sugar::FunctionKind kind) {
      auto e = sugar::fail_function_family(kind, expr::base("FUN"), expr::base("DS"),
                                           expr::base("RS"), d, r);
      return evaluate(e, db).empty();
    };
    CHECK(build(sugar::FunctionKind::Function) == oracle_function(fun, dset, rset, d));
    CHECK(build(sugar::FunctionKind::Total) == oracle_total(fun, dset, d));
    CHECK(build(sugar::FunctionKind::Surjective) == oracle_surjective(fun, rset, d));
    CHECK(build(sugar::FunctionKind::Injective) == oracle_injective(fun, d));
  };

  SUBCASE("unary-to-unary over a 2-element domain, exhaustive") {
    auto pairs = guess_universe(db_with(2, {}), 2);
    auto dom1 = guess_universe(db_with(2, {}), 1);
    for (std::uint64_t fm = 0; fm < 16; ++fm)
      for (std::uint64_t dm = 0; dm < 4; ++dm)
        for (std::uint64_t rm = 0; rm < 4; ++rm)
          run(2, subset_of(pairs, fm), subset_of(dom1, dm), subset_of(dom1, rm), 1, 1);
  }

  SUBCASE("unary-to-unary over a 3-element domain, sampled") {
    auto pairs = guess_universe(db_with(3, {}), 2);
    auto dom1 = guess_universe(db_with(3, {}), 1);
    TestRng rng(23);
    for (int i = 0; i < 400; ++i)
      run(3, subset_of(pairs, rng.below(1ull << 9)), subset_of(dom1, rng.below(8)),
          subset_of(dom1, rng.below(8)), 1, 1);
  }

  SUBCASE("binary domain tuples, sampled") {
    auto triples = guess_universe(db_with(2, {}), 3);
    auto dom2 = guess_universe(db_with(2, {}), 2);
    auto dom1 = guess_universe(db_with(2, {}), 1);
    TestRng rng(31);
    for (int i = 0; i < 200; ++i)
      run(2, subset_of(triples, rng.below(1ull << 8)), subset_of(dom2, rng.below(1ull << 4)),
          subset_of(dom1, rng.below(4)), 2, 1);
  }
}

TEST_CASE("size comparison holds for some auxiliary extension iff the counts compare") {
  auto dom1 = guess_universe(db_with(3, {}), 1);
  auto solvable = [](const Database& db, sugar::SizeCmp kind, int arity_n, int arity_k) {
    NpAlgQuery q;
    q.guesses = {{"AUX", kind == sugar::SizeCmp::Leq ? arity_k + arity_n : arity_n + arity_k}};
    q.fail = sugar::fail_size_cmp(kind, "AUX", expr::base("NS"), expr::base("KS"), arity_n,
                                  arity_k);
    return solve_exact(q, db).found();
  };

  SUBCASE("unary sets over a 3-element domain, exhaustive") {
    for (std::uint64_t nm = 0; nm < 8; ++nm)
      for (std::uint64_t km = 0; km < 8; ++km) {
        auto nset = subset_of(dom1, nm);
        auto kset = subset_of(dom1, km);
        auto db = db_with(3, {{"NS", make_rel(1, nset)}, {"KS", make_rel(1, kset)}});
        CHECK(solvable(db, sugar::SizeCmp::Geq, 1, 1) == (nset.size() >= kset.size()));
        CHECK(solvable(db, sugar::SizeCmp::Leq, 1, 1) == (nset.size() <= kset.size()));
        CHECK(solvable(db, sugar::SizeCmp::Eq, 1, 1) == (nset.size() == kset.size()));
      }
  }

  SUBCASE("mixed arities") {
    // |NS| = 2, |KS| = 3 with KS holding pairs.
    std::set<Tuple> nset = {{I(1)}, {I(2)}};
    std::set<Tuple> kset = {{I(1), I(1)}, {I(2), I(2)}, {I(1), I(2)}};
    auto db = db_with(2, {{"NS", make_rel(1, nset)}, {"KS", make_rel(2, kset)}});
    CHECK_FALSE(solvable(db, sugar::SizeCmp::Geq, 1, 2));
    CHECK(solvable(db, sugar::SizeCmp::Leq, 1, 2));
    CHECK_FALSE(solvable(db, sugar::SizeCmp::Eq, 1, 2));

    std::set<Tuple> ksmall = {{I(1), I(1)}};
    auto db2 = db_with(2, {{"NS", make_rel(1, nset)}, {"KS", make_rel(2, ksmall)}});
    CHECK(solvable(db2, sugar::SizeCmp::Geq, 1, 2));
    CHECK_FALSE(solvable(db2, sugar::SizeCmp::Leq, 1, 2));
    CHECK_FALSE(solvable(db2, sugar::SizeCmp::Eq, 1, 2));
  }
}

TEST_CASE("permutation check against a brute-force oracle") {
  auto run = [](int m, const std::set<Tuple>& nset, const std::set<Tuple>& perm) {
    auto db = db_with(m, {{"NS", make_rel(1, nset)}});
    Extensions ext = {{"PERM", make_rel(2, perm)}};
    auto fail = sugar::fail_permutation("PERM", expr::base("NS"), 1);
    CHECK(evaluate(fail, db, ext).empty() == oracle_permutation(perm, nset));
  };

  SUBCASE("full 2-element domain, exhaustive") {
    auto pairs = guess_universe(db_with(2, {}), 2);
    auto dom1 = guess_universe(db_with(2, {}), 1);
    for (std::uint64_t pm = 0; pm < 16; ++pm)
      run(2, std::set<Tuple>(dom1.begin(), dom1.end()), subset_of(pairs, pm));
  }

  SUBCASE("full 3-element domain, exhaustive") {
    auto pairs = guess_universe(db_with(3, {}), 2);
    auto dom1 = guess_universe(db_with(3, {}), 1);
    for (std::uint64_t pm = 0; pm < (1ull << 9); ++pm)
      run(3, std::set<Tuple>(dom1.begin(), dom1.end()), subset_of(pairs, pm));
  }

  SUBCASE("permuted set smaller than the domain") {
    run(3, {{I(1)}, {I(2)}}, {{I(1), I(2)}, {I(2), I(1)}});  // valid swap
    run(3, {{I(1)}, {I(2)}}, {{I(1), I(3)}, {I(3), I(1)}});  // leaves the set
    run(3, {{I(1)}, {I(2)}}, {{I(1), I(1)}});                // not total
  }
}

TEST_CASE("successor check: solvable for some auxiliary order iff succ orders the set") {
  auto solvable = [](int m, const std::set<Tuple>& nset, const std::set<Tuple>& succ) {
    auto db = db_with(m, {{"NS", make_rel(1, nset)}});
    NpAlgQuery q;
    q.guesses = {{"SUCC", 2}, {"ORD", 2}};
    q.fail = sugar::fail_successor("SUCC", "ORD", expr::base("NS"), 1);
    SolveOptions opts;
    opts.fixed["SUCC"] = make_rel(2, succ);
    return solve_exact(q, db, opts).found();
  };

  SUBCASE("canonical cases") {
    std::set<Tuple> full3 = {{I(1)}, {I(2)}, {I(3)}};
    CHECK(solvable(3, full3, {{I(1), I(2)}, {I(2), I(3)}}));
    CHECK(solvable(3, full3, {{I(3), I(1)}, {I(1), I(2)}}));
    CHECK_FALSE(solvable(3, full3, {{I(1), I(2)}, {I(2), I(1)}}));  // cycle
    CHECK_FALSE(solvable(3, full3, {{I(1), I(2)}}));                // misses 3
    CHECK_FALSE(solvable(3, full3, {}));
    CHECK(solvable(3, {{I(1)}}, {}));                    // singleton: empty succ
    CHECK_FALSE(solvable(3, {{I(1)}}, {{I(1), I(1)}}));  // reflexive pair
    CHECK(solvable(3, {}, {}));                          // empty set: empty succ
  }

  SUBCASE("2-element domain, exhaustive") {
    auto pairs = guess_universe(db_with(2, {}), 2);
    std::set<Tuple> full2 = {{I(1)}, {I(2)}};
    for (std::uint64_t sm = 0; sm < 16; ++sm) {
      auto succ = subset_of(pairs, sm);
      CHECK(solvable(2, full2, succ) == oracle_successor(succ, full2));
    }
  }

  SUBCASE("3-element domain, sampled") {
    auto pairs = guess_universe(db_with(3, {}), 2);
    std::set<Tuple> full3 = {{I(1)}, {I(2)}, {I(3)}};
    TestRng rng(41);
    for (int i = 0; i < 40; ++i) {
      auto succ = subset_of(pairs, rng.below(1ull << 9));
      CHECK(solvable(3, full3, succ) == oracle_successor(succ, full3));
    }
    // Every genuine successor relation over the 3 orderings of a 2-subset.
    std::set<Tuple> sub = {{I(1)}, {I(3)}};
    CHECK(solvable(3, sub, {{I(1), I(3)}}));
    CHECK(solvable(3, sub, {{I(3), I(1)}}));
    CHECK_FALSE(solvable(3, sub, {{I(1), I(2)}}));
  }
}
