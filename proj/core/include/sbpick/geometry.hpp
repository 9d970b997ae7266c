#pragma once

#include <vector>

#include "sbpick/config.hpp"
#include "sbpick/numerics.hpp"

namespace sbpick {

/// A point (s1, s2) of C^2; s1 plays the role of a sum and s2 of a product.
struct GPoint {
  Complex s1;
  Complex s2;

  friend bool operator==(const GPoint&, const GPoint&) = default;
};

/// A point (l1, l2) of C^2 read as bidisc coordinates.
struct BidiscPoint {
  Complex l1;
  Complex l2;

  /// Coordinate transposition (l1, l2) -> (l2, l1).
  BidiscPoint transposed() const noexcept { return {l2, l1}; }
  bool interior() const noexcept { return std::abs(l1) < 1.0 && std::abs(l2) < 1.0; }

  friend bool operator==(const BidiscPoint&, const BidiscPoint&) = default;
};

/// Preimage of a GPoint under the symmetrization map: one point for a double
/// root, otherwise the two transposed points, smaller root first.
struct Fiber {
  std::vector<BidiscPoint> points;
  bool double_root = false;
};

enum class Membership { Interior, Boundary, Exterior };

struct MembershipReport {
  Membership kind = Membership::Exterior;
  double rho = 0.0;           // sup of |f_s| over the disc; +inf when |s1| >= 2
  double fiber_radius = 0.0;  // max modulus of the two roots
};

/// (m1 + m2, m1 * m2).
GPoint pi_map(const BidiscPoint& mu) noexcept;

/// Roots of z^2 - s1 z + s2, computed without cancellation.
Fiber fiber(const GPoint& s, const Tolerances& tol = default_tolerances());

/// Closed-form sup over the unit disc of |f_s|:
///   (2|s1 - conj(s1) s2| + |s1^2 - 4 s2|) / (4 - |s1|^2).
/// Returns +inf when |s1| >= 2.
double rho(const GPoint& s) noexcept;

/// Classifies s relative to the symmetrized bidisc. For |s1| < 2 the rho
/// formula decides; otherwise the fiber roots do.
MembershipReport membership(const GPoint& s, const Tolerances& tol = default_tolerances());

inline bool is_interior(const GPoint& s, const Tolerances& tol = default_tolerances()) {
  return membership(s, tol).kind == Membership::Interior;
}

/// (2 lambda s2 - s1) / (2 - lambda s1). Throws PoleAtBoundary on a vanishing
/// denominator.
Complex f_s_eval(const GPoint& s, Complex lambda);

/// The test function (2 omega s2 - s1) / (2 - omega s1) for unimodular omega.
Complex phi_omega(Complex omega, const GPoint& s);

/// Operator substitution (2 s2 T - s1)(2 - s1 T)^{-1} for a contraction T.
/// Throws NotAContraction when ||T|| > 1 + tol.contraction_slack and
/// OutOfDomain when |s1| >= 2.
CMatrix s_T(const GPoint& s, const CMatrix& t, const Tolerances& tol = default_tolerances());

namespace detail {
/// s_T without the contraction check; callers guarantee ||t|| <= 1.
CMatrix s_T_unchecked(const GPoint& s, const CMatrix& t, const Tolerances& tol);
}  // namespace detail

}  // namespace sbpick
