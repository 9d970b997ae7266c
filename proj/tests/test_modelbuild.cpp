#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "sbpick/modelbuild.hpp"
#include "sbpick/pipeline.hpp"
#include "sbpick/realize.hpp"
#include "support.hpp"

namespace sbpick {
namespace {

using testing::random_interior;
using testing::random_matrix;

PickProblem single(GPoint s, Complex w) { return PickProblem{{s}, {w}}; }

BidiscModel model_for(const PickProblem& p) {
  const LiftedProblem lp = lift_problem(p);
  const FeasibilityResult r = solve_feasibility(lp);
  EXPECT_EQ(r.verdict, Verdict::Feasible);
  return bidisc_model_from_certificate(lp, *r.certificate);
}

TEST(BidiscModel, OneByOneFactor) {
  const LiftedProblem lp = lift_problem(single({0.0, 0.0}, 0.0));
  const PickCertificate c = solve_n1_closed_form(lp);
  const BidiscModel bm = bidisc_model_from_certificate(lp, c);
  ASSERT_EQ(bm.u1.cols(), 1);
  EXPECT_NEAR(bm.u1.col(0).norm(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(bm.u2.col(0).norm(), std::sqrt(0.5), 1e-15);
  EXPECT_LE(bidisc_model_residual(bm), 1e-15);
}

TEST(BidiscModel, ZeroTargetsDiagonal) {
  std::mt19937_64 rng(30);
  PickProblem p;
  for (int j = 0; j < 3; ++j) {
    p.nodes.push_back(random_interior(rng, 0.8));
    p.targets.push_back(0.0);
  }
  const BidiscModel bm = model_for(p);
  for (std::size_t k = 0; k < bm.lifted.size(); ++k) {
    const Index i = static_cast<Index>(k);
    const BidiscPoint& l = bm.lifted.nodes[k];
    const double diag = (1.0 - std::norm(l.l1)) * bm.u1.col(i).squaredNorm() +
                        (1.0 - std::norm(l.l2)) * bm.u2.col(i).squaredNorm();
    EXPECT_NEAR(diag, 1.0, 1e-8);
  }
}

TEST(BidiscModel, SolverCertificatesGiveSmallResidual) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const GeneratedProblem g = generate_problem(1 + static_cast<Index>(seed % 4), 2 + seed % 3, 900 + seed);
    EXPECT_LE(bidisc_model_residual(model_for(g.problem)), 1e-8);
  }
}

TEST(BidiscModel, RejectsIndefiniteCertificate) {
  const LiftedProblem lp = lift_problem(single({0.0, 0.0}, 0.0));
  HermitianMatrix neg(1);
  neg.set(0, 0, -0.5);
  HermitianMatrix pos(1);
  pos.set(0, 0, 1.5);
  EXPECT_ERROR_KIND(bidisc_model_from_certificate(lp, {neg, pos, 0.0, -0.5}, 1e-10), ErrorKind::NotPSD);
}

TEST(LurkingIsometry, RecoversKnownIsometry) {
  std::mt19937_64 rng(31);
  const CMatrix w = random_unitary(5, 77).leftCols(3);
  const CMatrix from = CMatrix::Identity(5, 5).leftCols(3) * random_matrix(3, 6, rng);
  const CMatrix to = w * from.topRows(3);
  const LurkingIsometry iso = fit_lurking_isometry(from, to, 1e-10);
  EXPECT_EQ(iso.basis.cols(), 3);
  EXPECT_LE(iso.fit_residual, 1e-12);
  EXPECT_LE(iso.isometry_defect, 1e-14);
  EXPECT_LE(iso.gramian_defect, 1e-12);
}

TEST(LurkingIsometry, EmptyFamily) {
  const LurkingIsometry iso = fit_lurking_isometry(CMatrix::Zero(3, 2), CMatrix::Zero(3, 2), 1e-10);
  EXPECT_EQ(iso.basis.cols(), 0);
  EXPECT_EQ(iso.fit_residual, 0.0);
}

// Gramians of the difference families recomputed entry by entry from the raw
// Gram vectors.
TEST(Symmetrize, BruteForceGramianIdentity) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const GeneratedProblem g = generate_problem(2, 2, 1100 + seed);
    const BidiscModel bm = model_for(g.problem);
    const LiftedProblem& lp = bm.lifted;
    const std::size_t m = lp.size();
    ASSERT_LE(m, 4u);
    auto ip1 = [&](std::size_t a, std::size_t b) { return bm.u1.col(static_cast<Index>(a)).dot(bm.u1.col(static_cast<Index>(b))); };
    auto ip2 = [&](std::size_t a, std::size_t b) { return bm.u2.col(static_cast<Index>(a)).dot(bm.u2.col(static_cast<Index>(b))); };
    // <v_b, v_a> with v_k = (u1_k, u2_{sigma k}); dot(x, y) = x^* y.
    auto ipv = [&](std::size_t a, std::size_t b) { return ip1(a, b) + ip2(lp.partner[a], lp.partner[b]); };

    const DifferenceFamilies fam = difference_families(bm);
    double incremental = 0.0;
    double identity = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t si = lp.partner[i];
        const std::size_t sj = lp.partner[j];
        const Complex diff = ipv(i, j) - ipv(i, sj) - ipv(si, j) + ipv(si, sj);
        const Complex l1i = lp.nodes[i].l1, l2i = lp.nodes[i].l2, l1j = lp.nodes[j].l1, l2j = lp.nodes[j].l2;
        const Complex weighted = std::conj(l1i) * l1j * ipv(i, j) - std::conj(l1i) * l2j * ipv(i, sj) -
                                 std::conj(l2i) * l1j * ipv(si, j) + std::conj(l2i) * l2j * ipv(si, sj);
        const Index ii = static_cast<Index>(i), jj = static_cast<Index>(j);
        incremental = std::max(incremental, std::abs(fam.differences.col(ii).dot(fam.differences.col(jj)) - diff));
        incremental = std::max(incremental, std::abs(fam.weighted.col(ii).dot(fam.weighted.col(jj)) - weighted));
        identity = std::max(identity, std::abs(diff - weighted));
      }
    }
    EXPECT_LE(incremental, 1e-13);
    EXPECT_LE(identity, 1e-7);
  }
}

TEST(Symmetrize, OriginNodeGivesNormIdentity) {
  for (double w : {0.0, 0.3, -0.8}) {
    const PickProblem p = single({0.0, 0.0}, w);
    const Symmetrized sym = symmetrize(model_for(p));
    EXPECT_NEAR(sym.model.v.col(0).squaredNorm(), 1.0 - w * w, 1e-9);
    EXPECT_LE(sym.model.residual, 1e-9);
  }
}

TEST(Symmetrize, DoubleRootNodeIsCarriedThrough) {
  const PickProblem p{{{1.0, 0.25}, {Complex(0.1, 0.2), 0.05}}, {0.2, Complex(0.1, 0.1)}};
  const BidiscModel bm = model_for(p);
  const Symmetrized sym = symmetrize(bm);
  EXPECT_EQ(bm.lifted.partner[0], 0u);
  EXPECT_LE(sym.model.residual, 1e-6);
}

TEST(Symmetrize, RandomProblemsSatisfyModelInvariants) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const GeneratedProblem g = generate_problem(1 + static_cast<Index>(seed % 4), 3, 1200 + seed);
    const Symmetrized sym = symmetrize(model_for(g.problem));
    EXPECT_LE(sym.model.residual, 1e-6);
    EXPECT_LE(sym.report.fiber_consistency, 1e-7);
    EXPECT_LE(sym.report.isometry_defect, 1e-8);
    EXPECT_LE(sym.report.unitarity_defect, 1e-10);
    EXPECT_TRUE(verify_gmodel(sym.model, g.problem.targets).pass);
  }
}

TEST(Symmetrize, Errors) {
  const GeneratedProblem g = generate_problem(2, 2, 1300);
  BidiscModel bm = model_for(g.problem);
  BidiscModel broken = bm;
  broken.u1.col(0) *= 3.0;  // a uniform scale would keep the Gramians equal
  EXPECT_ERROR_KIND(symmetrize(broken), ErrorKind::SymmetrizationFailed);

  BidiscModel unclosed = bm;
  unclosed.lifted.partner[0] = 0;
  EXPECT_ERROR_KIND(symmetrize(unclosed), ErrorKind::InvalidInput);
}

TEST(VerifyGModel, DetectsScaledVector) {
  const GeneratedProblem g = generate_problem(3, 3, 1400);
  GModel gm = symmetrize(model_for(g.problem)).model;
  ASSERT_TRUE(verify_gmodel(gm, g.problem.targets).pass);
  gm.v.col(1) *= 2.0;
  const GModelReport r = verify_gmodel(gm, g.problem.targets);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.residual, 0.1);

  GModel bad = gm;
  bad.v = CMatrix(gm.v.rows(), 1);
  EXPECT_ERROR_KIND(verify_gmodel(bad, g.problem.targets), ErrorKind::InvalidInput);
}

TEST(SpectralDecompose, OneDimensional) {
  const Complex omega = std::polar(1.0, 0.7);
  const CMatrix t = CMatrix::Constant(1, 1, omega);
  const SpectralDecomposition sd = spectral_decompose(t);
  ASSERT_EQ(sd.eigenvalues.size(), 1u);
  EXPECT_NEAR(std::abs(sd.eigenvalues[0] - omega), 0.0, 1e-15);
  EXPECT_LE(identity_check(sd, t, {0.3, 0.02}, {Complex(0.1, 0.4), -0.1}), 1e-15);
}

TEST(SpectralDecompose, DiagonalPlusMinusOne) {
  CMatrix t = CMatrix::Identity(2, 2);
  t(1, 1) = -1.0;
  const SpectralDecomposition sd = spectral_decompose(t);
  EXPECT_EQ(sd.eigenvalues.size(), 2u);
  std::mt19937_64 rng(32);
  for (int k = 0; k < 20; ++k) EXPECT_LE(identity_check(sd, t, random_interior(rng), random_interior(rng)), 1e-12);
}

TEST(SpectralDecompose, RandomUnitaryProjectionsAndIdentity) {
  const CMatrix t = random_unitary(6, 33);
  const SpectralDecomposition sd = spectral_decompose(t);
  CMatrix sum = CMatrix::Zero(6, 6);
  CMatrix rebuilt = CMatrix::Zero(6, 6);
  for (std::size_t k = 0; k < sd.projections.size(); ++k) {
    const CMatrix& e = sd.projections[k];
    EXPECT_LE(hermitian_defect(e), 1e-12);
    EXPECT_LE((e * e - e).cwiseAbs().maxCoeff(), 1e-10);
    for (std::size_t l = 0; l < k; ++l) EXPECT_LE((e * sd.projections[l]).cwiseAbs().maxCoeff(), 1e-10);
    sum += e;
    rebuilt += sd.eigenvalues[k] * e;
    EXPECT_NEAR(std::abs(sd.eigenvalues[k]), 1.0, 1e-15);
  }
  EXPECT_LE((sum - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((rebuilt - t).cwiseAbs().maxCoeff(), 1e-10);

  std::mt19937_64 rng(34);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) worst = std::max(worst, identity_check(sd, t, random_interior(rng), random_interior(rng)));
  EXPECT_LE(worst, 1e-10);

  // Spectral mapping: s_T = sum_k Phi_k(s) E_k.
  const GPoint s = random_interior(rng);
  CMatrix mapped = CMatrix::Zero(6, 6);
  for (std::size_t k = 0; k < sd.projections.size(); ++k) mapped += phi_omega(sd.eigenvalues[k], s) * sd.projections[k];
  EXPECT_LE((mapped - s_T(s, t)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SpectralDecompose, ClustersRepeatedEigenvalues) {
  const CMatrix q = random_unitary(4, 35);
  CVector d(4);
  const double eps = 1e-12;
  d << std::polar(1.0, 0.5), std::polar(1.0, 0.5), std::polar(1.0, std::numbers::pi - eps),
      std::polar(1.0, -std::numbers::pi + eps);
  const CMatrix t = q * d.asDiagonal() * q.adjoint();
  const SpectralDecomposition sd = spectral_decompose(t);
  ASSERT_EQ(sd.eigenvalues.size(), 2u);
  for (const CMatrix& e : sd.projections) EXPECT_NEAR(e.trace().real(), 2.0, 1e-10);
}

TEST(SpectralDecompose, RejectsNonUnitary) {
  EXPECT_ERROR_KIND(spectral_decompose(0.5 * CMatrix::Identity(2, 2)), ErrorKind::NotUnitary);
}

}  // namespace
}  // namespace sbpick
