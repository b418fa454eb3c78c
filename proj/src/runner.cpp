#include <algorithm>
#include <chrono>
#include <map>

#include <json.hpp>

#include "npalg/localsearch.hpp"
#include "npalg/runner.hpp"

namespace npalg::runner {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json constant_to_json(const Constant& c) {
  if (c.is_int()) return json(c.as_int());
  return json(c.as_string());
}

json table_to_json(const consql::Table& t) {
  json out = json::object();
  out["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json jr = json::array();
    for (const auto& c : row) jr.push_back(constant_to_json(c));
    rows.push_back(std::move(jr));
  }
  out["rows"] = std::move(rows);
  return out;
}

consql::Table relation_to_table(const Relation& r) {
  consql::Table t;
  t.columns = r.schema();
  for (const auto& tup : r.tuples()) t.rows.push_back(tup);
  return t;
}

void validate_flags(const SolveFlags& flags) {
  if (flags.solver != "exact" && flags.solver != "hill" && flags.solver != "tabu" &&
      flags.solver != "tandem")
    throw Error("unknown solver: " + flags.solver + " (expected exact, hill, tabu, or tandem)");
}

localsearch::SolverParams to_params(const SolveFlags& flags) {
  localsearch::SolverParams p;
  p.seed = flags.seed;
  p.max_iters = flags.max_iters;
  p.restarts = flags.restarts;
  p.tenure = flags.tenure;
  p.threads = flags.threads;
  return p;
}

// ---------------------------------------------------------------------------
// Local search over query witnesses: one boolean per candidate tuple, cost =
// |FAIL| under the induced witness.
// ---------------------------------------------------------------------------

struct SplitMix {
  std::uint64_t s;
  explicit SplitMix(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  SplitMix m(seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xbf58476d1ce4e5b9ull));
  return m.next();
}

struct QuerySearch {
  const NpAlgQuery& query;
  const Database& db;
  std::vector<std::vector<Tuple>> universes;  // per guess, sorted

  using State = std::vector<std::vector<char>>;
  using Flip = std::pair<std::size_t, std::size_t>;  // (guess, tuple index)

  explicit QuerySearch(const NpAlgQuery& q, const Database& d) : query(q), db(d) {
    for (const auto& g : q.guesses) universes.push_back(guess_universe(d, g.arity));
  }

  Witness witness(const State& s) const {
    Witness w;
    for (std::size_t gi = 0; gi < query.guesses.size(); ++gi) {
      std::vector<std::string> schema;
      for (int i = 1; i <= query.guesses[gi].arity; ++i) schema.push_back("$" + std::to_string(i));
      Relation r(schema);
      for (std::size_t ti = 0; ti < universes[gi].size(); ++ti)
        if (s[gi][ti]) r.insert(universes[gi][ti]);
      w[query.guesses[gi].name] = std::move(r);
    }
    return w;
  }

  std::int64_t cost(const State& s) const {
    return static_cast<std::int64_t>(
        evaluate_in_query(query, query.fail, db, witness(s)).size());
  }

  State random_state(std::uint64_t seed) const {
    SplitMix rng(derive(seed, 0x5eed));
    State s;
    for (const auto& u : universes) {
      std::vector<char> bits(u.size());
      for (auto& b : bits) b = static_cast<char>(rng.below(2));
      s.push_back(std::move(bits));
    }
    return s;
  }

  std::vector<Flip> flips() const {
    std::vector<Flip> out;
    for (std::size_t gi = 0; gi < universes.size(); ++gi)
      for (std::size_t ti = 0; ti < universes[gi].size(); ++ti) out.emplace_back(gi, ti);
    return out;
  }
};

struct QuerySearchResult {
  QuerySearch::State best;
  std::int64_t best_cost = 0;
  std::uint64_t iterations = 0;
};

QuerySearchResult query_restart(const QuerySearch& qs, const SolveFlags& flags, bool tabu,
                                int restart, const QuerySearch::State* start) {
  QuerySearch::State cur =
      start ? *start : qs.random_state(derive(flags.seed, static_cast<std::uint64_t>(restart)));
  std::int64_t cur_cost = qs.cost(cur);
  QuerySearchResult out{cur, cur_cost, 0};

  std::map<QuerySearch::Flip, std::uint64_t> tabu_until;
  std::vector<QuerySearch::Flip> moves = qs.flips();
  for (int iter = 0; iter < flags.max_iters && out.best_cost > 0 && !moves.empty(); ++iter) {
    ++out.iterations;
    SplitMix order_rng(derive(flags.seed, static_cast<std::uint64_t>(restart) + 0x10000,
                              static_cast<std::uint64_t>(iter)));
    std::vector<QuerySearch::Flip> order = moves;
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[order_rng.below(i)]);

    bool have = false;
    QuerySearch::Flip chosen;
    std::int64_t chosen_cost = 0;
    for (const auto& f : order) {
      cur[f.first][f.second] ^= 1;
      std::int64_t c = qs.cost(cur);
      cur[f.first][f.second] ^= 1;
      if (tabu) {
        auto it = tabu_until.find(f);
        bool is_tabu = it != tabu_until.end() && it->second > static_cast<std::uint64_t>(iter);
        if (is_tabu && c >= out.best_cost) continue;  // aspiration
      }
      if (!have || c < chosen_cost) {
        have = true;
        chosen = f;
        chosen_cost = c;
      }
    }
    if (!have) break;
    if (!tabu && chosen_cost >= cur_cost) break;  // hill: local optimum
    cur[chosen.first][chosen.second] ^= 1;
    cur_cost = chosen_cost;
    if (tabu)
      tabu_until[chosen] = static_cast<std::uint64_t>(iter) + 1 +
                           static_cast<std::uint64_t>(flags.tenure);
    if (cur_cost < out.best_cost) {
      out.best = cur;
      out.best_cost = cur_cost;
    }
  }
  return out;
}

QuerySearchResult query_strategy(const QuerySearch& qs, const SolveFlags& flags, bool tabu,
                                 const QuerySearch::State* start) {
  QuerySearchResult best;
  bool have = false;
  for (int r = 0; r < flags.restarts; ++r) {
    QuerySearchResult o = query_restart(qs, flags, tabu, r, r == 0 ? start : nullptr);
    std::uint64_t iters = best.iterations + o.iterations;
    if (!have || o.best_cost < best.best_cost) {
      have = true;
      best = std::move(o);
    }
    best.iterations = iters;
    if (best.best_cost == 0) break;
  }
  return best;
}

QuerySearchResult query_local_search(const QuerySearch& qs, const SolveFlags& flags) {
  if (flags.max_iters < 1) throw Error("max_iters must be at least 1");
  if (flags.restarts < 1) throw Error("restarts must be at least 1");
  if (flags.tenure < 0) throw Error("tenure must be nonnegative");
  if (flags.solver == "hill" || flags.solver == "tabu")
    return query_strategy(qs, flags, flags.solver == "tabu", nullptr);
  // tandem: hill first, then tabu seeded with hill's best.
  QuerySearchResult hill = query_strategy(qs, flags, false, nullptr);
  if (hill.best_cost == 0) return hill;
  QuerySearchResult tabu = query_strategy(qs, flags, true, &hill.best);
  tabu.iterations += hill.iterations;
  return tabu.best_cost < hill.best_cost ? tabu
                                         : QuerySearchResult{hill.best, hill.best_cost,
                                                             tabu.iterations};
}

}  // namespace

std::string RunReport::to_json(bool include_timing) const {
  json out = json::object();
  out["schema"] = 1;
  out["answer"] = answer;
  if (objective)
    out["objective"] = *objective;
  else
    out["objective"] = nullptr;
  json rets = json::object();
  for (const auto& [name, table] : returns) rets[name] = table_to_json(table);
  out["returns"] = std::move(rets);
  json stats = json::object();
  stats["solver"] = solver;
  stats["seed"] = seed;
  stats["iterations"] = iterations;
  stats["restarts"] = restarts;
  if (include_timing) stats["wall_ms"] = wall_ms;
  out["stats"] = std::move(stats);
  return out.dump(2) + "\n";
}

RunReport run_spec(const std::string& spec_text, const textio::Instance& inst,
                   const SolveFlags& flags) {
  validate_flags(flags);
  auto start = Clock::now();
  consql::Specification spec = consql::parse_spec(spec_text);
  consql::LowerOptions opts;
  opts.keys = inst.keys;
  consql::SearchProblem problem = consql::lower_spec(spec, inst.db, opts);

  RunReport report;
  report.solver = flags.solver;
  report.seed = flags.seed;
  std::optional<consql::SearchState> solution;

  if (flags.solver == "exact") {
    auto res = consql::solve_exhaustive(problem, flags.budget);
    report.iterations = res.examined;
    report.restarts = 1;
    if (res.found) {
      solution = res.best;
      report.objective = res.objective;
    }
  } else {
    localsearch::SolverParams params = to_params(flags);
    localsearch::SearchResult res;
    if (flags.solver == "hill") {
      res = localsearch::hill_climb(problem, params);
      report.restarts = flags.restarts;
    } else if (flags.solver == "tabu") {
      res = localsearch::tabu_search(problem, params);
      report.restarts = flags.restarts;
    } else {
      res = localsearch::tandem(problem, params,
                                {localsearch::Strategy::Hill, localsearch::Strategy::Tabu});
      report.restarts = 2 * flags.restarts;
    }
    report.iterations = res.iterations;
    if (res.best_cost.violations == 0) {
      // Re-validate the claimed witness against the exact semantics before
      // reporting it.
      for (const auto& c : problem.spec.checks)
        if (!consql::eval_condition(problem, c, res.best).holds)
          throw Error("internal error: local-search witness failed re-validation");
      solution = res.best;
      report.objective = res.best_cost.objective;
    }
  }

  report.answer = solution.has_value();
  if (report.answer) report.returns = consql::eval_returns(problem, solution);
  report.wall_ms = ms_since(start);
  return report;
}

RunReport run_query(const NpAlgQuery& query, const Database& db, const SolveFlags& flags) {
  validate_flags(flags);
  auto start = Clock::now();
  RunReport report;
  report.solver = flags.solver;
  report.seed = flags.seed;
  std::optional<Witness> witness;

  if (flags.solver == "exact") {
    SolveOptions opts;
    opts.budget = flags.budget;
    SolveResult res = solve_exact(query, db, opts);
    if (res.status == SolveResult::Status::BudgetExhausted)
      throw Error("search budget exhausted after " + std::to_string(res.examined) +
                  " candidate witnesses");
    report.iterations = res.examined;
    report.restarts = 1;
    if (res.found()) witness = std::move(*res.witness);
  } else {
    QuerySearch qs(query, db);
    QuerySearchResult res = query_local_search(qs, flags);
    report.iterations = res.iterations;
    report.restarts = flags.restarts * (flags.solver == "tandem" ? 2 : 1);
    if (res.best_cost == 0) {
      Witness w = qs.witness(res.best);
      if (!check(query, db, w))
        throw Error("internal error: local-search witness failed re-validation");
      witness = std::move(w);
    }
  }

  report.answer = witness.has_value();
  if (report.answer)
    for (const auto& [name, rel] : *witness) report.returns[name] = relation_to_table(rel);
  report.wall_ms = ms_since(start);
  return report;
}

std::string classify_report(const NpAlgQuery& query) {
  FragmentClass fc = classify(query);
  const char* tag = fc.tag == FragmentClass::Tag::Eaa         ? "Eaa"
                    : fc.tag == FragmentClass::Tag::E1eStarAa ? "E1eStarAa"
                                                              : "General";
  return std::string(tag) + "\n" + fc.detail + "\n";
}

Circuit parse_circuit_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("circuit JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("gates"))
    throw Error("circuit JSON: expected an object with \"n\" and \"gates\"");
  Circuit c;
  c.n = j["n"].get<int>();
  for (const auto& g : j["gates"]) {
    if (!g.is_array() || g.size() != 3)
      throw Error("circuit JSON: each gate is a [kind, b, c] triple");
    std::string kind = g[0].get<std::string>();
    Gate gate;
    if (kind == "IN")
      gate.kind = Gate::Kind::In;
    else if (kind == "AND")
      gate.kind = Gate::Kind::And;
    else if (kind == "OR")
      gate.kind = Gate::Kind::Or;
    else if (kind == "NOT")
      gate.kind = Gate::Kind::Not;
    else
      throw Error("circuit JSON: unknown gate kind " + kind);
    gate.b = g[1].get<int>();
    gate.c = g[2].get<int>();
    c.gates.push_back(gate);
  }
  c.validate();
  return c;
}

std::string circuit_to_json(const Circuit& c) {
  json out = json::object();
  out["n"] = c.n;
  json gates = json::array();
  for (const auto& g : c.gates) {
    const char* kind = g.kind == Gate::Kind::In    ? "IN"
                       : g.kind == Gate::Kind::And ? "AND"
                       : g.kind == Gate::Kind::Or  ? "OR"
                                                   : "NOT";
    gates.push_back(json::array({kind, g.b, g.c}));
  }
  out["gates"] = std::move(gates);
  return out.dump(2) + "\n";
}

Witness parse_witness_json(const std::string& text, const NpAlgQuery& query) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("witness JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw Error("witness JSON: expected an object of relations");
  Witness w;
  for (const auto& [name, rows] : j.items()) {
    const GuessDecl* g = query.find_guess(name);
    if (!g) throw Error("witness JSON: " + name + " is not a guessed relation");
    std::vector<std::string> schema;
    for (int i = 1; i <= g->arity; ++i) schema.push_back("$" + std::to_string(i));
    Relation r(schema);
    if (!rows.is_array()) throw Error("witness JSON: " + name + " must be an array of rows");
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != g->arity)
        throw Error("witness JSON: " + name + " rows must have arity " +
                    std::to_string(g->arity));
      Tuple t;
      for (const auto& v : row) {
        if (v.is_number_integer())
          t.push_back(Constant::integer(v.get<std::int64_t>()));
        else if (v.is_string())
          t.push_back(Constant::symbol(v.get<std::string>()));
        else
          throw Error("witness JSON: values must be integers or strings");
      }
      r.insert(std::move(t));
    }
    w[name] = std::move(r);
  }
  for (const auto& g : query.guesses)
    if (!w.count(g.name)) {
      std::vector<std::string> schema;
      for (int i = 1; i <= g.arity; ++i) schema.push_back("$" + std::to_string(i));
      w[g.name] = Relation(schema);
    }
  return w;
}

}  // namespace npalg::runner
