#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sbpick/config.hpp"
#include "sbpick/geometry.hpp"
#include "sbpick/modelbuild.hpp"
#include "sbpick/pick.hpp"
#include "sbpick/realize.hpp"

namespace sbpick {

struct PipelineSettings {
  SolverSettings solver;
  Tolerances tol;
  // Polishing pass for the certificate handed to the model construction.
  double interior_tol = 1e-13;
  int interior_sweeps = 500;
  double interior_min_relative_margin = 1e-2;
};

/// Every stage of an end-to-end solve. Later stages are empty when an earlier
/// one did not produce a feasible certificate.
struct InterpolationResult {
  LiftedProblem lifted;
  FeasibilityResult feasibility;
  std::optional<PickCertificate> certificate;
  bool interior_certificate = false;
  std::optional<Symmetrized> model;
  std::optional<BuiltColligation> realization;
};

/// Lift, decide, and on a feasible verdict build the G-model and the
/// realizing colligation.
InterpolationResult interpolate(const PickProblem& p, const PipelineSettings& cfg = {});

/// Random interior points pi(mu) with mu uniform in the bidisc of the given
/// coordinate radius.
std::vector<GPoint> sample_interior(std::size_t count, std::uint64_t seed, double radius = 0.999);

/// max |f(s)| over `samples` random interior points.
double boundedness_sweep(const RealizedFunction& f, std::size_t samples, std::uint64_t seed);

struct GeneratedProblem {
  PickProblem problem;
  Colligation reference;
};

/// A solvable problem: targets are the values of random_schur(dim, seed) at n
/// random interior nodes with pairwise max-norm separation at least 1e-3.
GeneratedProblem generate_problem(Index dim, std::size_t n, std::uint64_t seed);

}  // namespace sbpick
