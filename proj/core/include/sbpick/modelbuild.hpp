#pragma once

#include <vector>

#include "sbpick/config.hpp"
#include "sbpick/geometry.hpp"
#include "sbpick/numerics.hpp"
#include "sbpick/pick.hpp"

namespace sbpick {

/// Gram vectors of a bidisc Pick certificate: column k of u1 (u2) is the
/// vector attached to lifted node k, so a1(i,j) = <u1_j, u1_i>.
struct BidiscModel {
  LiftedProblem lifted;
  CMatrix u1;
  CMatrix u2;
};

/// Factors a1 and a2. Eigenvalues at or below `rank_tol` are dropped; a
/// negative rank_tol selects max(1e-13, 2 * max(0, -min_eig)).
BidiscModel bidisc_model_from_certificate(const LiftedProblem& lp, const PickCertificate& c,
                                          double rank_tol = -1.0);

/// max over (i,j) of the bidisc model identity defect at the lifted nodes.
double bidisc_model_residual(const BidiscModel& bm);

/// An isometry fitted between two vector families with (nearly) equal
/// Gramians: image * basis^* maps from_j to approximately to_j.
struct LurkingIsometry {
  CMatrix basis;            // orthonormal basis of span{from_j}
  CMatrix image;            // isometry applied to `basis`, same column count
  double fit_residual = 0.0;       // max_j |image basis^* from_j - to_j|
  double isometry_defect = 0.0;    // ||image^* image - I||_max after the snap
  double gramian_defect = 0.0;     // same quantity before the snap
};

/// Least-squares map on the numerical span of `from`, then the nearest
/// isometry. Singular values below rel_rank * sigma_max are ignored.
LurkingIsometry fit_lurking_isometry(const CMatrix& from, const CMatrix& to, double rel_rank);

/// Finite G-model: 1 - conj(w_i) w_j = <(1 - (s_i)_T^* (s_j)_T) v_j, v_i>.
struct GModel {
  CMatrix T;                  // unitary
  std::vector<GPoint> nodes;  // source nodes
  CMatrix v;                  // column j is the model vector of node j
  double residual = 0.0;

  Index dim() const noexcept { return T.rows(); }
};

struct SymmetrizationReport {
  double gram_mismatch = 0.0;      // difference vs weighted-difference Gramians
  double isometry_defect = 0.0;    // max | ||L q|| - 1 | over the domain basis
  double fit_residual = 0.0;       // max_k |U d_k - e_k|
  double unitarity_defect = 0.0;   // ||U^* U - I||_max
  double fiber_consistency = 0.0;  // max |w_lambda - w_transpose(lambda)|
  Index domain_rank = 0;
};

struct Symmetrized {
  GModel model;
  SymmetrizationReport report;
};

/// Vectors v_k = (u1_k, u2_{sigma k}) stacked column-wise.
CMatrix stacked_vectors(const BidiscModel& bm);

/// Columns v_k - v_{sigma k} and l1_k v_k - l2_k v_{sigma k}, which carry
/// equal Gramians whenever the certificate is exact.
struct DifferenceFamilies {
  CMatrix differences;
  CMatrix weighted;
};
DifferenceFamilies difference_families(const BidiscModel& bm);

/// Builds a G-model from a bidisc model whose lifted node set is closed under
/// transposition with fiber-constant targets. Throws SymmetrizationFailed
/// when the two Gramians disagree by more than tol.gram_mismatch.
Symmetrized symmetrize(const BidiscModel& bm, const Tolerances& tol = default_tolerances());

struct GModelReport {
  double residual = 0.0;
  bool pass = false;
};

/// Recomputes both sides of the model identity at every node pair.
GModelReport verify_gmodel(const GModel& gm, const std::vector<Complex>& targets, double tol = 1e-6);

/// T = sum_k omega_k E_k for a unitary T; eigenvalues closer than
/// tol.eigen_cluster_gap share one projection.
struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;
  std::vector<CMatrix> projections;
};

/// Throws NotUnitary when ||T^* T - I|| exceeds tol.unitarity.
SpectralDecomposition spectral_decompose(const CMatrix& t, const Tolerances& tol = default_tolerances());

/// || (1 - t_T^* s_T) - sum_k (1 - conj(Phi_k(t)) Phi_k(s)) E_k ||.
double identity_check(const SpectralDecomposition& sd, const CMatrix& t_op, const GPoint& s, const GPoint& t);

}  // namespace sbpick
