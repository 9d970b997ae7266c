#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sbpick/config.hpp"
#include "sbpick/geometry.hpp"
#include "sbpick/numerics.hpp"

namespace sbpick {

/// Interpolation data on the symmetrized bidisc: nodes s_j and disc targets w_j.
struct PickProblem {
  std::vector<GPoint> nodes;
  std::vector<Complex> targets;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Checks the problem invariants: n >= 1, matching lengths, |w_j| <= 1,
/// every node interior, nodes pairwise separated. Throws InvalidInput,
/// OutOfDomain or DuplicateNodes.
void validate(const PickProblem& p, const Tolerances& tol = default_tolerances());

/// The equivalent problem on the bidisc, one row per point of each fiber.
struct LiftedProblem {
  std::vector<BidiscPoint> nodes;
  std::vector<Complex> targets;
  std::vector<std::size_t> origin;   // lifted index -> source node index
  std::vector<std::size_t> partner;  // lifted index -> index of its transpose
  std::vector<GPoint> source_nodes;
  std::vector<Complex> source_targets;

  std::size_t size() const noexcept { return nodes.size(); }
};

enum class FiberOrder { Sorted, Reversed };

/// Lifts through the symmetrization map. Fibers are appended in source order;
/// FiberOrder::Reversed lists each two-point fiber transposed-first.
LiftedProblem lift_problem(const PickProblem& p, FiberOrder order = FiberOrder::Sorted,
                           const Tolerances& tol = default_tolerances());

/// A pair of positive semidefinite matrices (a1, a2) with
///   1 - conj(w_i) w_j = a1_ij (1 - conj(l1_i) l1_j) + a2_ij (1 - conj(l2_i) l2_j).
struct PickCertificate {
  HermitianMatrix a1;
  HermitianMatrix a2;
  double residual = 0.0;
  double min_eig = 0.0;
};

struct CertificateReport {
  double residual = 0.0;
  double min_eig1 = 0.0;
  double min_eig2 = 0.0;
  bool pass = false;
};

/// Direct check of the bidisc Pick identity for a candidate certificate.
CertificateReport verify_certificate(const LiftedProblem& lp, const PickCertificate& c, double tol);

/// Left-hand side 1 - conj(w_i) w_j of the Pick identity.
CMatrix pick_kernel(const LiftedProblem& lp);
/// Coefficient 1 - conj(l_i) l_j for coordinate 1 or 2.
CMatrix coordinate_kernel(const LiftedProblem& lp, int coordinate);

struct SolverSettings {
  double tol = 1e-9;        // max entrywise residual accepted as feasible
  int max_sweeps = 50000;   // Dykstra sweeps
  double stall = 1e-12;     // Frobenius step below which the iteration has stalled
  double margin = 0.0;      // require a1, a2 >= margin * I
  // Gauss-Newton refinement of a1 = F1 F1^*, a2 = F2 F2^* started from the
  // current iterate once its residual drops below polish_threshold.
  bool polish = true;
  double polish_threshold = 1e-2;
};

enum class Verdict { Feasible, Infeasible, Inconclusive };

struct FeasibilityResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<PickCertificate> certificate;
  double gap = 0.0;  // distance between the affine set and the cone at exit
  int sweeps = 0;
  bool polished = false;  // certificate came from the factor refinement
  double dual_bound = 0.0;  // negative when Infeasible is certified by a dual matrix
};

/// Decides the bidisc Pick criterion by Dykstra alternating projections
/// between the entrywise affine set and the product of PSD cones.
///
/// Dykstra approaches low-rank solutions slowly. When enabled, a factored
/// Gauss-Newton refinement is attempted on a doubling sweep schedule; its
/// output is PSD by construction and is accepted only at residual <= tol.
///
/// Infeasible is reported in two ways. Usually a Hermitian Z fitted to the
/// displacement between the cone and the affine set satisfies the Farkas
/// alternative, and dual_bound < -tol records the certified violation. Failing
/// that, a stalled iteration with a gap above tol is reported as Infeasible
/// with dual_bound = 0; that verdict is heuristic.
///
/// Unimodular targets are handled up front: the problem is solvable exactly
/// when every target equals the unimodular one, with the zero certificate.
FeasibilityResult solve_feasibility(const LiftedProblem& lp, const SolverSettings& cfg = {});

/// Searches for a certificate whose matrices are bounded below by a positive
/// multiple of the identity, starting at the largest margin the diagonal
/// equations allow and shrinking geometrically. Returns nullopt when no
/// margin down to `min_relative_margin` of the bound succeeds.
std::optional<PickCertificate> solve_interior_certificate(const LiftedProblem& lp, double tol = 1e-13,
                                                         int sweeps_per_attempt = 4000,
                                                         double min_relative_margin = 1e-6);

/// Explicit certificate for a problem with a single source node: the
/// constant-function kernel split equally between the coordinates,
/// a_k(i,j) = (1 - |w|^2) / (2 (1 - conj(l_k,i) l_k,j)).
PickCertificate solve_n1_closed_form(const LiftedProblem& lp);

}  // namespace sbpick
