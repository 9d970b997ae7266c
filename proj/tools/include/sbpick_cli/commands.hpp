#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "sbpick_cli/io.hpp"

namespace sbpick::cli {

// Process exit codes. Each outcome category maps to exactly one code.
enum ExitCode : int {
  kOk = 0,
  kInfeasible = 2,
  kInconclusive = 3,
  kMalformedInput = 64,
  kNoInput = 66,
  kNumericFailure = 70,
  kCannotWrite = 73,
};

struct RunConfig {
  std::optional<double> tol;      // solver acceptance threshold
  std::optional<int> max_iter;    // solver sweep budget
  int grid = 1024;                // omega grid for spectral checks
  std::size_t samples = 10000;    // boundedness sweep size
  std::uint64_t seed = 0;         // boundedness sweep seed
  bool strict = false;            // eval: out-of-domain points are fatal
};

// Each command writes its artifacts, prints diagnostics to `err` and returns
// an exit code. Library and I/O exceptions are translated, never propagated.

// problem.json -> certificate.json, gmodel.json, colligation.json, report.json
// in out_dir. Only report.json is written when the problem is not feasible.
int cmd_solve(const std::filesystem::path& problem, const std::filesystem::path& out_dir, const RunConfig& cfg,
              std::ostream& err);

// CSV with one row per point. Rows outside the closure of G carry nan values
// and a warning unless cfg.strict, in which case nothing is written.
int cmd_eval(const std::filesystem::path& colligation, const std::filesystem::path& points,
             std::ostream& csv, const RunConfig& cfg, std::ostream& err);

// problem.json and reference_colligation.json in out_dir.
int cmd_generate(Index dim, std::size_t n, std::uint64_t seed, const std::filesystem::path& out_dir,
                 std::ostream& err);

// "s1,s2" (real) or "s1_re,s1_im,s2_re,s2_im" -> JSON report.
int cmd_check_membership(const std::string& point, std::ostream& out, std::ostream& err);
// pair.json -> JSON report of the omega-grid maximum.
int cmd_check_spectral(const std::filesystem::path& pair, std::ostream& out, const RunConfig& cfg,
                       std::ostream& err);
// CSV r,value,direct over r = 1 - 10^-k, k = 1..4, and the requested r.
int cmd_check_discontinuity(double r, std::ostream& out, std::ostream& err);

}  // namespace sbpick::cli
