#pragma once

#include <cstdint>
#include <vector>

#include "sbpick/config.hpp"
#include "sbpick/geometry.hpp"
#include "sbpick/numerics.hpp"
#include "sbpick/realize.hpp"

namespace sbpick {

/// A pair of square matrices of equal size with S1 S2 = S2 S1.
class CommutingPair {
 public:
  /// Throws InvalidInput for mismatched shapes or a commutator norm above
  /// tol.commutator.
  CommutingPair(CMatrix s1, CMatrix s2, const Tolerances& tol = default_tolerances());

  const CMatrix& s1() const noexcept { return s1_; }
  const CMatrix& s2() const noexcept { return s2_; }
  double commutator_norm() const noexcept { return commutator_norm_; }
  Index dim() const noexcept { return s1_.rows(); }

 private:
  CMatrix s1_;
  CMatrix s2_;
  double commutator_norm_ = 0.0;
};

/// Joint eigenvalues read off a simultaneous triangularization (Schur form of
/// a generic combination S1 + c S2).
std::vector<GPoint> joint_spectrum(const CommutingPair& p);

struct SpectralDomainReport {
  double max_norm = 0.0;
  Complex argmax = 1.0;
  int grid = 0;
};

/// max over an equispaced omega-grid of ||(2 omega S2 - S1)(2 - omega S1)^{-1}||.
/// The grid maximum is a lower bound for the supremum over the circle. Ties
/// resolve to the smallest grid index.
///
/// Throws OutOfDomain when a joint eigenvalue is not interior to G and
/// SingularResolvent when 2 - omega S1 is singular at a grid point.
SpectralDomainReport spectral_domain_check(const CommutingPair& p, int grid = 1024);

/// phi(S) = V diag(phi(sigma_j)) V^{-1} for a jointly diagonalizable pair.
/// Throws NotDiagonalizable for defective pairs or when cond(V) exceeds
/// tol.max_diagonalizer_condition; OutOfDomain when the joint spectrum leaves G.
CMatrix evaluate_on_pair(const RealizedFunction& f, const CommutingPair& p,
                         const Tolerances& tol = default_tolerances());

/// diag_n f_s(lambda_n) truncated to finitely many lambdas, probed at the
/// boundary point (2 conj(omega), conj(omega)^2).
struct DiagonalDefiningFunction {
  std::vector<Complex> lambdas;
  Complex omega = 1.0;
};

struct DiscontinuityReport {
  double direct = 0.0;       // max_n |f_{s0}(lambda_n) - f_{s_r}(lambda_n)|
  double closed_form = 0.0;  // (1 - r) max_n 1 / |1 - r lambda_n conj(omega)|
};

/// Norm of F(2 w, w^2) - F(2 r w, r w^2), w = conj(omega), computed from the
/// diagonal entries and from the closed form. Requires 0 < r < 1 and a
/// non-empty lambda list inside the disc.
DiscontinuityReport discontinuity_demo(const DiagonalDefiningFunction& d, double r);

/// Points omega * (1 - 10^{-k/4}), k = 1, 2, ..., refined until the gap to
/// omega drops below 10 (1 - r)^2.
std::vector<Complex> adaptive_lambda_grid(Complex omega, double r);

/// Normal commuting pair Q diag(s1_k) Q^*, Q diag(s2_k) Q^* with a Haar Q.
CommutingPair normal_pair(const std::vector<GPoint>& joint_eigenvalues, std::uint64_t seed);

}  // namespace sbpick
