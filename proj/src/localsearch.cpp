#include <algorithm>
#include <map>
#include <thread>

#include "npalg/localsearch.hpp"

namespace npalg::localsearch {

using consql::Component;

namespace {

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

bool problem_minimizes(const SearchProblem& p) {
  return !p.spec.objective || p.spec.objective->minimize;
}

void validate(const SolverParams& params) {
  if (params.max_iters < 1) throw Error("max_iters must be at least 1");
  if (params.restarts < 1) throw Error("restarts must be at least 1");
  if (params.tenure < 0) throw Error("tenure must be nonnegative");
  if (params.threads < 1) throw Error("threads must be at least 1");
}

template <typename Rng>
void shuffle_moves(std::vector<Move>& moves, Rng& rng) {
  for (std::size_t i = moves.size(); i > 1; --i)
    std::swap(moves[i - 1], moves[rng.below(i)]);
}

/// Attributes a move touches, for the tabu list.
void touched(const SearchProblem& p, const Move& m,
             std::vector<std::pair<std::size_t, std::size_t>>& out) {
  out.clear();
  out.emplace_back(m.component, m.pos);
  if (p.components[m.component].kind == Component::Kind::Permutation)
    out.emplace_back(m.component, static_cast<std::size_t>(m.value));
}

struct RestartOutcome {
  SearchState best;
  Cost best_cost;
  std::uint64_t iterations = 0;
  std::vector<Cost> trace;
};

RestartOutcome run_restart(const SearchProblem& p, const SolverParams& params,
                           Strategy strategy, int restart,
                           const SearchState* start) {
  bool minimize = problem_minimizes(p);
  SearchState cur =
      start ? *start : initial_state(p, derive(params.seed, static_cast<std::uint64_t>(restart)));
  Cost cur_cost = cost(p, cur);
  RestartOutcome out;
  out.best = cur;
  out.best_cost = cur_cost;
  out.trace.push_back(cur_cost);

  // (component, pos) -> first iteration at which the attribute is free again.
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> tabu_until;
  std::vector<std::pair<std::size_t, std::size_t>> attrs;

  for (int iter = 0; iter < params.max_iters; ++iter) {
    ++out.iterations;
    std::vector<Move> moves = neighborhood(p, cur);
    if (moves.empty()) break;
    SplitMix order_rng(
        derive(params.seed, static_cast<std::uint64_t>(restart) + 0x10000,
               static_cast<std::uint64_t>(iter)));
    shuffle_moves(moves, order_rng);

    bool have = false;
    Move chosen;
    Cost chosen_cost;
    for (const Move& m : moves) {
      SearchState next = cur;
      apply_move(p, next, m);
      Cost c = cost(p, next);
      if (strategy == Strategy::Tabu) {
        touched(p, m, attrs);
        bool is_tabu = false;
        for (const auto& a : attrs) {
          auto it = tabu_until.find(a);
          if (it != tabu_until.end() && it->second > static_cast<std::uint64_t>(iter))
            is_tabu = true;
        }
        if (is_tabu && !better_cost(c, out.best_cost, minimize)) continue;  // aspiration
      }
      if (!have || better_cost(c, chosen_cost, minimize)) {
        have = true;
        chosen = m;
        chosen_cost = c;
      }
    }
    if (!have) break;  // every move tabu and none aspires
    if (strategy == Strategy::Hill && !better_cost(chosen_cost, cur_cost, minimize))
      break;  // local optimum
    apply_move(p, cur, chosen);
    cur_cost = chosen_cost;
    out.trace.push_back(cur_cost);
    if (strategy == Strategy::Tabu) {
      touched(p, chosen, attrs);
      for (const auto& a : attrs)
        tabu_until[a] = static_cast<std::uint64_t>(iter) + 1 +
                        static_cast<std::uint64_t>(params.tenure);
    }
    if (better_cost(cur_cost, out.best_cost, minimize)) {
      out.best = cur;
      out.best_cost = cur_cost;
    }
  }
  return out;
}

SearchResult run_strategy(const SearchProblem& p, const SolverParams& params,
                          Strategy strategy, const SearchState* start) {
  validate(params);
  bool minimize = problem_minimizes(p);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(params.restarts));

  auto work = [&](int first, int step) {
    for (int r = first; r < params.restarts; r += step)
      outcomes[static_cast<std::size_t>(r)] =
          run_restart(p, params, strategy, r, r == 0 ? start : nullptr);
  };
  if (params.threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < params.threads; ++t) pool.emplace_back(work, t, params.threads);
    for (auto& t : pool) t.join();
  }

  SearchResult res;
  bool have = false;
  for (const auto& o : outcomes) {
    res.iterations += o.iterations;
    res.traces.push_back(o.trace);
    // Deterministic merge: strictly better cost wins, earlier restart on ties.
    if (!have || better_cost(o.best_cost, res.best_cost, minimize)) {
      have = true;
      res.best = o.best;
      res.best_cost = o.best_cost;
    }
  }
  if (!have) {
    res.best = consql::first_state(p);
    res.best_cost = cost(p, res.best);
  }
  return res;
}

}  // namespace

bool better_cost(const Cost& a, const Cost& b, bool minimize) {
  if (a.violations != b.violations) return a.violations < b.violations;
  if (!a.objective || !b.objective) return false;
  return minimize ? *a.objective < *b.objective : *a.objective > *b.objective;
}

Cost cost(const SearchProblem& problem, const SearchState& state) {
  Cost c;
  c.violations = consql::total_violations(problem, state);
  if (problem.spec.objective) c.objective = consql::eval_objective(problem, state);
  return c;
}

std::vector<Move> neighborhood(const SearchProblem& problem, const SearchState& state) {
  std::vector<Move> out;
  for (std::size_t ci = 0; ci < problem.components.size(); ++ci) {
    const Component& c = problem.components[ci];
    const auto& v = state.comp[ci];
    switch (c.kind) {
      case Component::Kind::Subset:
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back({ci, i, v[i] ? 0 : 1});
        break;
      case Component::Kind::TotalFunction:
      case Component::Kind::PartialFunction:
      case Component::Kind::Partition: {
        int radix = static_cast<int>(c.choices_per_row());
        for (std::size_t i = 0; i < v.size(); ++i)
          for (int val = 0; val < radix; ++val)
            if (val != v[i]) out.push_back({ci, i, val});
        break;
      }
      case Component::Kind::Permutation:
        for (std::size_t i = 0; i < v.size(); ++i)
          for (std::size_t j = i + 1; j < v.size(); ++j)
            out.push_back({ci, i, static_cast<int>(j)});
        break;
    }
  }
  return out;
}

void apply_move(const SearchProblem& problem, SearchState& state, const Move& m) {
  const Component& c = problem.components[m.component];
  auto& v = state.comp[m.component];
  if (c.kind == Component::Kind::Permutation) {
    std::swap(v[m.pos], v[static_cast<std::size_t>(m.value)]);
    return;
  }
  if (c.kind == Component::Kind::Subset) {
    v[m.pos] = v[m.pos] ? 0 : 1;
    return;
  }
  if (m.value < 0 || static_cast<std::size_t>(m.value) >= c.choices_per_row())
    throw Error("move value out of range");
  v[m.pos] = m.value;
}

SearchState initial_state(const SearchProblem& problem, std::uint64_t seed) {
  SplitMix rng(derive(seed, 0x5eed));
  SearchState s;
  for (const auto& c : problem.components) {
    std::vector<int> v(c.rows.size(), 0);
    if (c.kind == Component::Kind::Permutation) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
      for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
    } else {
      std::size_t radix = c.choices_per_row();
      if (radix == 0 && !v.empty())
        throw Error("empty range for a total function over a nonempty domain");
      for (auto& x : v) x = static_cast<int>(rng.below(radix));
    }
    s.comp.push_back(std::move(v));
  }
  return s;
}

SearchResult hill_climb(const SearchProblem& problem, const SolverParams& params) {
  return run_strategy(problem, params, Strategy::Hill, nullptr);
}

SearchResult tabu_search(const SearchProblem& problem, const SolverParams& params) {
  return run_strategy(problem, params, Strategy::Tabu, nullptr);
}

SearchResult tandem(const SearchProblem& problem, const SolverParams& params,
                    const std::vector<Strategy>& strategies) {
  if (strategies.size() < 2) throw Error("tandem needs at least two strategies");
  validate(params);
  bool minimize = problem_minimizes(problem);
  SearchResult best;
  bool have = false;
  const SearchState* anchor = nullptr;
  SearchState anchor_state;
  for (const Strategy st : strategies) {
    SearchResult r = run_strategy(problem, params, st, anchor);
    if (!have || better_cost(r.best_cost, best.best_cost, minimize)) {
      have = true;
      best.best = r.best;
      best.best_cost = r.best_cost;
    }
    best.iterations += r.iterations;
    for (auto& t : r.traces) best.traces.push_back(std::move(t));
    anchor_state = best.best;
    anchor = &anchor_state;
  }
  return best;
}

}  // namespace npalg::localsearch
