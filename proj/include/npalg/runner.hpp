#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "npalg/circuit.hpp"
#include "npalg/consql_solve.hpp"
#include "npalg/polyfrag.hpp"
#include "npalg/textio.hpp"

namespace npalg::runner {

/// Solver selection and knobs shared by every batch entry point.
struct SolveFlags {
  std::string solver = "exact";  // exact | hill | tabu | tandem
  std::uint64_t seed = 0;
  int max_iters = 10000;
  int restarts = 20;
  int tenure = 10;
  int threads = 1;
  std::uint64_t budget = 1ull << 20;  // states / witnesses examined by exact search
};

/// The result of one solve run. answer=false implies empty returns and no
/// objective. Reports from non-exact solvers are emitted only after the
/// claimed witness re-validates against the exact semantics.
struct RunReport {
  bool answer = false;
  std::optional<std::int64_t> objective;
  std::map<std::string, consql::Table> returns;
  std::string solver;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  int restarts = 0;
  double wall_ms = 0;

  /// Versioned JSON ("schema": 1), deterministic field order. Wall time is
  /// appended only on request, so default reports are bit-identical across
  /// repeated seeded runs.
  std::string to_json(bool include_timing = false) const;
};

/// Parses and solves a specification against a loaded instance.
RunReport run_spec(const std::string& spec_text, const textio::Instance& inst,
                   const SolveFlags& flags);

/// Solves a query; the witness relations become the report's returns.
/// Non-exact solvers search over per-tuple membership flips with |FAIL| as
/// the violation count.
RunReport run_query(const NpAlgQuery& query, const Database& db, const SolveFlags& flags);

/// Human-readable fragment classification: tag on the first line, matched
/// structure on the second.
std::string classify_report(const NpAlgQuery& query);

/// Circuit JSON: {"n": <int>, "gates": [["IN",0,0], ["AND",1,2], ...]} with
/// 1-based gate references (validated).
Circuit parse_circuit_json(const std::string& text);
std::string circuit_to_json(const Circuit& c);

/// Witness JSON: {"Q": [[1, "a"], ...], ...}; integers stay integers,
/// strings become symbols.
Witness parse_witness_json(const std::string& text, const NpAlgQuery& query);

}  // namespace npalg::runner
