#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sbpick_cli/commands.hpp"

namespace {

using namespace sbpick::cli;

// Sends `text` to stdout, or atomically to `path` when one was given.
int emit(const std::string& path, const std::string& text, int code) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return code;
  }
  try {
    write_atomic(path, text);
  } catch (const OutputError& e) {
    std::cerr << e.what() << "\n";
    return kCannotWrite;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nevanlinna-Pick interpolation on the symmetrized bidisc"};
  app.require_subcommand(1);

  RunConfig cfg;
  double tol = 0.0;
  int max_iter = 0;

  auto* solve = app.add_subcommand("solve", "Decide a Pick problem and build the interpolant");
  std::string problem_path;
  std::string solve_out = ".";
  solve->add_option("problem", problem_path, "problem.json")->required();
  solve->add_option("-o,--out", solve_out, "Output directory for the solution bundle");
  solve->add_option("--tol", tol, "Certificate acceptance threshold")->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", max_iter, "Sweep budget of the feasibility solver")->check(CLI::PositiveNumber);
  solve->add_option("--samples", cfg.samples, "Boundedness sweep size")->capture_default_str();
  solve->add_option("--seed", cfg.seed, "Boundedness sweep seed")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Evaluate a realized function at points of G");
  std::string colligation_path;
  std::string points_path;
  std::string eval_out;
  eval->add_option("colligation", colligation_path, "colligation.json")->required();
  eval->add_option("points", points_path, "points.json or problem.json")->required();
  eval->add_option("-o,--out", eval_out, "CSV output file (default stdout)");
  eval->add_flag("--strict", cfg.strict, "Fail on points outside the closure of G");

  auto* generate = app.add_subcommand("generate", "Write a solvable problem and its reference colligation");
  long dim = 2;
  std::size_t n = 3;
  std::uint64_t gen_seed = 0;
  std::string gen_out = ".";
  generate->add_option("--dim", dim, "State-space dimension")->capture_default_str();
  generate->add_option("-n,--nodes", n, "Number of nodes")->capture_default_str();
  generate->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  generate->add_option("-o,--out", gen_out, "Output directory");

  auto* check = app.add_subcommand("check", "Membership, spectral-domain and discontinuity checks");
  std::string membership_point;
  std::string pair_path;
  double demo_r = 0.0;
  std::string check_out;
  auto* m_opt = check->add_option("--membership", membership_point, "\"s1,s2\" or \"s1_re,s1_im,s2_re,s2_im\"");
  auto* s_opt = check->add_option("--spectral", pair_path, "pair.json with matrices s1 and s2");
  auto* d_opt = check->add_option("--demo-discontinuity", demo_r, "Radius r in (0, 1)");
  m_opt->excludes(s_opt)->excludes(d_opt);
  s_opt->excludes(d_opt);
  check->add_option("--grid", cfg.grid, "Omega grid size")->capture_default_str();
  check->add_option("-o,--out", check_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kMalformedInput;
  }

  if (solve->parsed()) {
    if (solve->count("--tol")) cfg.tol = tol;
    if (solve->count("--max-iter")) cfg.max_iter = max_iter;
    const int code = cmd_solve(problem_path, solve_out, cfg, std::cerr);
    if (code <= kInconclusive) std::cout << (solve_out + "/report.json") << "\n";
    return code;
  }
  if (eval->parsed()) {
    std::ostringstream csv;
    const int code = cmd_eval(colligation_path, points_path, csv, cfg, std::cerr);
    return code == kOk ? emit(eval_out, csv.str(), code) : code;
  }
  if (generate->parsed()) return cmd_generate(dim, n, gen_seed, gen_out, std::cerr);

  std::ostringstream out;
  int code = kMalformedInput;
  if (m_opt->count()) {
    code = cmd_check_membership(membership_point, out, std::cerr);
  } else if (s_opt->count()) {
    code = cmd_check_spectral(pair_path, out, cfg, std::cerr);
  } else if (d_opt->count()) {
    code = cmd_check_discontinuity(demo_r, out, std::cerr);
  } else {
    std::cerr << "check: one of --membership, --spectral, --demo-discontinuity is required\n";
  }
  return code == kOk ? emit(check_out, out.str(), code) : code;
}
