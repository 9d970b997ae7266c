#include "sbpick/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sbpick/error.hpp"

namespace sbpick {

namespace {

constexpr double kNodeRadius = 0.9;
constexpr double kNodeSeparation = 1e-3;

Complex uniform_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, theta);
}

}  // namespace

InterpolationResult interpolate(const PickProblem& p, const PipelineSettings& cfg) {
  InterpolationResult out;
  out.lifted = lift_problem(p, FiberOrder::Sorted, cfg.tol);
  out.feasibility = solve_feasibility(out.lifted, cfg.solver);
  if (out.feasibility.verdict != Verdict::Feasible) return out;

  // A certificate bounded away from the cone boundary keeps both lurking
  // isometries well conditioned; fall back to the decision certificate.
  out.certificate = solve_interior_certificate(out.lifted, cfg.interior_tol, cfg.interior_sweeps,
                                               cfg.interior_min_relative_margin);
  out.interior_certificate = out.certificate.has_value();
  if (!out.certificate) out.certificate = out.feasibility.certificate;

  const BidiscModel bm = bidisc_model_from_certificate(out.lifted, *out.certificate);
  out.model = symmetrize(bm, cfg.tol);
  out.realization = build_colligation(out.model->model, p.targets, cfg.tol);
  return out;
}

std::vector<GPoint> sample_interior(std::size_t count, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::vector<GPoint> out;
  out.reserve(count);
  while (out.size() < count) {
    const GPoint s = pi_map({uniform_disc(rng, radius), uniform_disc(rng, radius)});
    if (is_interior(s)) out.push_back(s);
  }
  return out;
}

double boundedness_sweep(const RealizedFunction& f, std::size_t samples, std::uint64_t seed) {
  double worst = 0.0;
  for (const GPoint& s : sample_interior(samples, seed)) worst = std::max(worst, std::abs(f(s)));
  return worst;
}

GeneratedProblem generate_problem(Index dim, std::size_t n, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw Error(ErrorKind::InvalidInput, "generate_problem: n and dim must be positive");
  const RealizedFunction f = random_schur(dim, seed);
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  GeneratedProblem out{{}, f.colligation()};
  while (out.problem.nodes.size() < n) {
    const GPoint s = pi_map({uniform_disc(rng, kNodeRadius), uniform_disc(rng, kNodeRadius)});
    if (!is_interior(s)) continue;
    bool separated = true;
    for (const GPoint& t : out.problem.nodes) {
      if (std::max(std::abs(s.s1 - t.s1), std::abs(s.s2 - t.s2)) < kNodeSeparation) separated = false;
    }
    if (!separated) continue;
    out.problem.nodes.push_back(s);
    out.problem.targets.push_back(f(s));
  }
  return out;
}

}  // namespace sbpick
