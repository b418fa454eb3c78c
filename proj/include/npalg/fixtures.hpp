#pragma once

#include <string>
#include <vector>

#include "npalg/guess.hpp"

namespace npalg::fixtures {

/// One worked problem: a query or specification file, its instance data, and
/// the expected decision. Paths are relative to the fixtures root directory.
struct Fixture {
  std::string name;
  std::string input_file;    // *.nq (query) or *.consql (specification)
  std::string data_dir;      // directory of per-relation CSVs
  bool expected_decision = false;
  std::string witness_file;  // optional known-good witness (queries only)
  bool polynomial = false;   // also decidable by the 2SAT fragment solver

  bool is_spec() const {
    return input_file.size() >= 7 &&
           input_file.substr(input_file.size() - 7) == ".consql";
  }
};

/// The full registry. Every entry's expected decision is enforced against
/// exhaustive search by the test suite.
const std::vector<Fixture>& fixtures();

/// Builders for the corpus queries, shared by the registry generator and the
/// tests (the on-disk files must stay in sync with these).
NpAlgQuery independent_set_query();
NpAlgQuery clique_query();
NpAlgQuery hamiltonian_path_query();
NpAlgQuery non_reachability_query(int from, int to);
NpAlgQuery sat_query();
NpAlgQuery evenness_query();

}  // namespace npalg::fixtures
