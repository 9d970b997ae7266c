#pragma once

#include <complex>

#include <Eigen/Dense>

#include "sbpick/config.hpp"

namespace sbpick {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Square matrix whose storage is conjugate-symmetric by construction.
///
/// Every write goes through the constructor or set(), both of which keep
/// entry(i,j) == conj(entry(j,i)) bit-for-bit and the diagonal real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(Index dim);
  /// Symmetrizes (m + m*) / 2. Throws InvalidInput for non-square or
  /// non-finite input.
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix identity(Index dim);

  Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  /// Writes (i,j) and its mirror (j,i).
  void set(Index i, Index j, Complex value);

 private:
  CMatrix m_;
};

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, column k pairs with values(k)
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Throws NonConvergence when the sweep budget in
/// `tol.jacobi_max_sweeps` is exhausted.
EigenDecomposition herm_eig(const HermitianMatrix& h, const Tolerances& tol = default_tolerances());

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// Frobenius-nearest positive semidefinite matrix (eigenvalue clamp at zero).
HermitianMatrix psd_project(const HermitianMatrix& h);

/// Returns F (dim x r) with F F* = h, keeping the r eigenvalues above
/// `rank_tol`. Column k of F* is the Gram vector of index k, so
/// h(i,j) = <u_j, u_i> with u_j = conj(row j of F). Throws NotPSD when an
/// eigenvalue is below -rank_tol.
CMatrix psd_factor(const HermitianMatrix& h, double rank_tol);

/// Polar factor of a full-column-rank matrix: the isometry closest to `m` in
/// Frobenius norm. Throws RankDeficient otherwise.
CMatrix nearest_isometry(const CMatrix& m);

/// Solves a x = b with partial pivoting. Throws IllConditioned when the
/// reciprocal condition estimate falls below 1 / tol.ill_conditioned.
CMatrix solve_linear(const CMatrix& a, const CMatrix& b, const Tolerances& tol = default_tolerances());

/// Orthonormal basis of the column span, dropping singular values below
/// rel_tol * sigma_max.
CMatrix orthonormal_range(const CMatrix& m, double rel_tol);

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of q in C^{q.rows()}. Deterministic (Householder QR).
CMatrix orthonormal_complement(const CMatrix& q);

/// Hermitian part helper: max |m(i,j) - conj(m(j,i))|.
double hermitian_defect(const CMatrix& m);

/// ||q* q - I||_max for a matrix with orthonormal columns expected.
double isometry_defect(const CMatrix& q);

/// True when every entry is finite.
bool all_finite(const CMatrix& m);

}  // namespace sbpick
