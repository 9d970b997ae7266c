#include <benchmark/benchmark.h>

#include "sbpick/pipeline.hpp"
#include "sbpick/spectral.hpp"

namespace {

using namespace sbpick;

void BM_HermEig(benchmark::State& state) {
  const Index n = state.range(0);
  const CMatrix u = random_unitary(n, 3);
  RVector d(n);
  for (Index k = 0; k < n; ++k) d(k) = static_cast<double>(k) - 0.5 * static_cast<double>(n);
  const HermitianMatrix h(CMatrix(u * d.cast<Complex>().asDiagonal() * u.adjoint()));
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(h));
}
BENCHMARK(BM_HermEig)->Arg(4)->Arg(10)->Arg(20);

void BM_SolveFeasibility(benchmark::State& state) {
  const GeneratedProblem g = generate_problem(2, static_cast<std::size_t>(state.range(0)), 11);
  const LiftedProblem lp = lift_problem(g.problem);
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasibility(lp));
}
BENCHMARK(BM_SolveFeasibility)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_Interpolate(benchmark::State& state) {
  const GeneratedProblem g = generate_problem(4, static_cast<std::size_t>(state.range(0)), 12);
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(g.problem));
}
BENCHMARK(BM_Interpolate)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const RealizedFunction f = random_schur(state.range(0), 13);
  const std::vector<GPoint> pts = sample_interior(256, 14);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(pts[k]));
    k = (k + 1) % pts.size();
  }
}
BENCHMARK(BM_Evaluate)->Arg(2)->Arg(8)->Arg(20);

void BM_SpectralDomainCheck(benchmark::State& state) {
  const std::vector<GPoint> eigs = sample_interior(static_cast<std::size_t>(state.range(0)), 15, 0.9);
  const CommutingPair p = normal_pair(eigs, 16);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_domain_check(p));
}
BENCHMARK(BM_SpectralDomainCheck)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
