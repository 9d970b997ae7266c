#pragma once

namespace sbpick {

/// Numerical thresholds shared by every module. Callers that need different
/// behaviour copy the defaults and override individual fields.
struct Tolerances {
  // numerics
  int jacobi_max_sweeps = 30;
  double orthogonality = 1e-12;          // V*V = I after herm_eig (times dim)
  double ill_conditioned = 1e14;         // condition estimate that refuses a solve

  // geometry
  double boundary = 1e-9;                // membership band around rho = 1
  double contraction_slack = 1e-10;      // ||T|| <= 1 + slack
  double double_root = 1e-14;            // |discriminant| below this is a double root

  // pick
  double node_separation = 1e-8;         // max-norm on (s1, s2)
  double unimodular = 1e-12;             // | |w| - 1 | below this counts as |w| = 1

  // modelbuild / realize
  double span_rank = 1e-10;              // singular values < span_rank * sigma_max are zero
  double gram_mismatch = 1e-6;           // lurking-isometry Gramian agreement
  double unitarity = 1e-10;              // ||U*U - I||
  double eigen_cluster_gap = 1e-8;       // spectral projection grouping
  double colligation_slack = 1e-9;       // ||block|| <= 1 + slack

  // spectral
  double commutator = 1e-10;
  double max_diagonalizer_condition = 1e8;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances kDefaults{};
  return kDefaults;
}

}  // namespace sbpick
