#include "npalg/guess.hpp"

#include <algorithm>

namespace npalg {

namespace {

void validate_witness(const NpAlgQuery& query, const Database& db, const Witness& w) {
  for (const auto& g : query.guesses) {
    auto it = w.find(g.name);
    if (it == w.end()) throw Error("witness missing guessed relation: " + g.name);
    const Relation& rel = it->second;
    if (rel.arity() != static_cast<std::size_t>(g.arity))
      throw Error("witness arity mismatch for " + g.name);
    for (const auto& t : rel.tuples())
      for (const auto& c : t)
        if (!db.dom().contains({c}))
          throw Error("witness tuple of " + g.name + " uses constant outside DOM: " +
                      c.to_string());
  }
}

Extensions let_env(const NpAlgQuery& query, const Database& db, const Witness& w) {
  Extensions env = w;
  for (const auto& [name, e] : query.lets) env[name] = evaluate(e, db, env);
  return env;
}

}  // namespace

bool check(const NpAlgQuery& query, const Database& db, const Witness& w) {
  validate_witness(query, db, w);
  Extensions env = let_env(query, db, w);
  return evaluate(query.fail, db, env).empty();
}

Relation evaluate_in_query(const NpAlgQuery& query, const ExprPtr& e, const Database& db,
                           const Witness& w) {
  Extensions env = let_env(query, db, w);
  return evaluate(e, db, env);
}

std::vector<Tuple> guess_universe(const Database& db, int arity) {
  std::vector<Tuple> out;
  if (db.dom().empty()) return out;
  std::vector<Constant> domvals;
  for (const auto& t : db.dom().tuples()) domvals.push_back(t[0]);
  std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
  while (true) {
    Tuple t;
    t.reserve(idx.size());
    for (auto i : idx) t.push_back(domvals[i]);
    out.push_back(std::move(t));
    int pos = arity - 1;
    while (pos >= 0) {
      if (++idx[static_cast<std::size_t>(pos)] < domvals.size()) break;
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_extensions(const GuessDecl& decl, const Database& db) {
  std::uint64_t cells = 1;
  for (int i = 0; i < decl.arity; ++i) {
    cells *= db.dom().size();
    if (cells > 62) throw Error("count_extensions: |DOM|^arity too large");
  }
  return 1ull << cells;
}

SolveResult solve_exact(const NpAlgQuery& query, const Database& db, const SolveOptions& opts) {
  // Enumerated guesses with their universes; fixed guesses are pinned.
  struct Slot {
    std::string name;
    std::vector<std::string> schema;
    std::vector<Tuple> universe;
    std::uint64_t mask = 0;
  };
  std::vector<Slot> slots;
  Witness pinned = opts.fixed;
  for (const auto& g : query.guesses) {
    if (pinned.count(g.name)) continue;
    Slot s;
    s.name = g.name;
    for (int i = 1; i <= g.arity; ++i) s.schema.push_back("$" + std::to_string(i));
    auto it = opts.universes.find(g.name);
    s.universe = it != opts.universes.end() ? it->second : guess_universe(db, g.arity);
    if (s.universe.size() > 62)
      throw Error("solve_exact: universe of " + g.name + " too large to enumerate");
    slots.push_back(std::move(s));
  }

  SolveResult res;
  while (true) {
    if (res.examined >= opts.budget) {
      res.status = SolveResult::Status::BudgetExhausted;
      return res;
    }
    Witness w = pinned;
    for (const auto& s : slots) {
      Relation rel(s.schema);
      for (std::size_t i = 0; i < s.universe.size(); ++i)
        if (s.mask & (1ull << i)) rel.insert(s.universe[i]);
      w[s.name] = std::move(rel);
    }
    ++res.examined;
    if (check(query, db, w)) {
      res.status = SolveResult::Status::Found;
      res.witness = std::move(w);
      return res;
    }
    // Odometer step, first slot least significant.
    std::size_t pos = 0;
    for (; pos < slots.size(); ++pos) {
      std::uint64_t limit =
          slots[pos].universe.size() >= 64 ? 0 : (1ull << slots[pos].universe.size());
      if (++slots[pos].mask < limit) break;
      slots[pos].mask = 0;
    }
    if (pos == slots.size()) {
      res.status = SolveResult::Status::NoSolution;
      return res;
    }
  }
}

ExprPtr found_expr(const NpAlgQuery& query) {
  if (!query.fail) throw Error("found_expr: query has no FAIL expression");
  using namespace expr;
  return difference(dom(), project({"$1"}, product(dom(), query.fail)));
}

}  // namespace npalg
