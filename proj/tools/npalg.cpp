#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "npalg/runner.hpp"

namespace {

using namespace npalg;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw Error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_spec_file(const std::string& path) {
  return path.size() >= 7 && path.substr(path.size() - 7) == ".consql";
}

void add_solver_flags(CLI::App* cmd, runner::SolveFlags& flags) {
  cmd->add_option("--solver", flags.solver, "exact, hill, tabu, or tandem")
      ->default_val("exact");
  cmd->add_option("--seed", flags.seed, "random seed for local search");
  cmd->add_option("--max-iters", flags.max_iters, "iteration cap per restart");
  cmd->add_option("--restarts", flags.restarts, "local-search restarts");
  cmd->add_option("--tenure", flags.tenure, "tabu tenure in iterations");
  cmd->add_option("--threads", flags.threads, "worker threads for restarts");
  cmd->add_option("--budget", flags.budget, "state/witness cap for exact search");
}

int emit_report(const runner::RunReport& report, const std::string& json_path, bool timing) {
  std::string json = report.to_json(timing);
  std::cout << json;
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << json;
    if (!out) throw Error("cannot write report to " + json_path);
  }
  return report.answer ? 0 : 1;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Guess-and-check query and specification runner"};
  app.require_subcommand(1);

  runner::SolveFlags flags;
  std::string input, data_dir, witness_path, json_path;
  bool timing = false;

  CLI::App* solve = app.add_subcommand(
      "solve", "Solve a specification (.consql) or query file against a CSV data directory");
  solve->add_option("input", input, "specification or query file")->required();
  solve->add_option("data", data_dir, "directory of per-relation CSV files")->required();
  add_solver_flags(solve, flags);
  solve->add_option("--json", json_path, "also write the report to this file");
  solve->add_flag("--timing", timing, "include wall-clock time in the report");

  CLI::App* check_cmd = app.add_subcommand(
      "check", "Verify that a witness (JSON) makes a query's FAIL expression empty");
  check_cmd->add_option("input", input, "query file")->required();
  check_cmd->add_option("data", data_dir, "directory of per-relation CSV files")->required();
  check_cmd->add_option("witness", witness_path, "witness JSON file")->required();

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Report the polynomial-fragment class of a query");
  classify_cmd->add_option("input", input, "query file")->required();

  CLI::App* translate_cmd = app.add_subcommand(
      "translate", "Translate an existential second-order sentence into a query");
  translate_cmd->add_option("input", input, "sentence file")->required();
  translate_cmd->add_option("data", data_dir, "CSV data directory fixing the vocabulary")
      ->required();

  CLI::App* gen_cmd = app.add_subcommand(
      "gen-succinct", "Generate the 3-coloring query of a circuit-presented graph");
  gen_cmd->add_option("input", input, "circuit JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) {
    textio::Instance inst = textio::load_instance(data_dir);
    runner::RunReport report =
        is_spec_file(input) ? runner::run_spec(slurp(input), inst, flags)
                            : runner::run_query(textio::parse_query(slurp(input)), inst.db, flags);
    return emit_report(report, json_path, timing);
  }
  if (check_cmd->parsed()) {
    NpAlgQuery query = textio::parse_query(slurp(input));
    textio::Instance inst = textio::load_instance(data_dir);
    Witness w = runner::parse_witness_json(slurp(witness_path), query);
    bool ok = check(query, inst.db, w);
    std::cout << (ok ? "witness accepted\n" : "witness rejected\n");
    return ok ? 0 : 1;
  }
  if (classify_cmd->parsed()) {
    std::cout << runner::classify_report(textio::parse_query(slurp(input)));
    return 0;
  }
  if (translate_cmd->parsed()) {
    EsoSentence sentence = textio::parse_eso(slurp(input));
    textio::Instance inst = textio::load_instance(data_dir);
    std::cout << textio::print_query(build_psi(sentence, inst.db));
    return 0;
  }
  // gen-succinct
  Circuit c = runner::parse_circuit_json(slurp(input));
  std::cout << textio::print_query(gen_succinct_3col(c));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
