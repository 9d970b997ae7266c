#pragma once

#include <cstdint>
#include <vector>

#include "sbpick/config.hpp"
#include "sbpick/geometry.hpp"
#include "sbpick/modelbuild.hpp"
#include "sbpick/numerics.hpp"

namespace sbpick {

/// Colligation (A, beta, gamma, D) on C + M together with the operator T on M.
/// The block operator
///     [ A      <., beta> ]
///     [ gamma  D         ]
/// and T are contractions.
struct Colligation {
  Complex A = 0.0;
  CVector beta;
  CVector gamma;
  CMatrix D;
  CMatrix T;

  Index dim() const noexcept { return T.rows(); }

  /// The (1 + dim) x (1 + dim) block matrix.
  CMatrix block() const;
  /// Inverse of block(): splits a block matrix into a colligation with T.
  static Colligation from_block(const CMatrix& block, CMatrix t);
};

/// phi(s) = A + <s_T (1 - D s_T)^{-1} gamma, beta>.
///
/// Immutable once built; evaluation is safe from concurrent threads.
class RealizedFunction {
 public:
  /// Throws InvalidInput on inconsistent shapes and NotAContraction when T or
  /// the block matrix is not contractive within tolerance.
  explicit RealizedFunction(Colligation c, const Tolerances& tol = default_tolerances());

  const Colligation& colligation() const noexcept { return c_; }

  /// Throws OutOfDomain outside the closure of G (or when |s1| >= 2) and
  /// IllConditioned when 1 - D s_T is numerically singular.
  Complex operator()(const GPoint& s) const;

 private:
  Colligation c_;
  Tolerances tol_;
};

inline Complex evaluate(const RealizedFunction& f, const GPoint& s) { return f(s); }

struct ColligationReport {
  double gram_mismatch = 0.0;      // Gramians of (1, S_j v_j) and (w_j, v_j)
  double isometry_defect = 0.0;    // snapped lurking isometry
  double fit_residual = 0.0;       // max_j |L X_j - Y_j|
  double contraction_norm = 0.0;   // ||L#||
  double node_residual = 0.0;      // max_j |phi(s_j) - w_j|
  double reconstruction = 0.0;     // max_j |v_j - (1 - D S_j)^{-1} gamma|
};

struct BuiltColligation {
  Colligation colligation;
  ColligationReport report;
};

/// Second lurking-isometry step: maps (1, (s_j)_T v_j) to (w_j, v_j), extends
/// by zero off their span and reads off the blocks. Throws ModelInconsistent
/// when the two Gramians differ by more than tol.gram_mismatch.
BuiltColligation build_colligation(const GModel& gm, const std::vector<Complex>& targets,
                                   const Tolerances& tol = default_tolerances());

/// Random Schur-class function: Haar-like unitary T and a QR-orthogonalized
/// Gaussian block scaled by a uniform factor in [0.3, 1].
RealizedFunction random_schur(Index dim, std::uint64_t seed);

/// Haar-distributed unitary (QR of a complex Gaussian with phase fix).
CMatrix random_unitary(Index dim, std::uint64_t seed);

/// Max over four complex directions of |D_h f - D_{ih} f / i| with central
/// differences of step h. Requires rho(s) < 0.9 (OutOfDomain otherwise).
double directional_derivative_check(const RealizedFunction& f, const GPoint& s, double step = 1e-5);

}  // namespace sbpick
