#include "sbpick/geometry.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "sbpick/error.hpp"

namespace sbpick {

namespace {

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

Membership classify_radius(double r, double tol) {
  if (r < 1.0 - tol) return Membership::Interior;
  if (r <= 1.0 + tol) return Membership::Boundary;
  return Membership::Exterior;
}

}  // namespace

GPoint pi_map(const BidiscPoint& mu) noexcept { return {mu.l1 + mu.l2, mu.l1 * mu.l2}; }

Fiber fiber(const GPoint& s, const Tolerances& tol) {
  const Complex disc = s.s1 * s.s1 - 4.0 * s.s2;
  Fiber out;
  if (std::abs(disc) <= tol.double_root) {
    const Complex z = 0.5 * s.s1;
    out.points.push_back({z, z});
    out.double_root = true;
    return out;
  }
  Complex root = std::sqrt(disc);
  // Pick the sign that adds magnitudes, then recover the small root from the product.
  if ((std::conj(s.s1) * root).real() < 0.0) root = -root;
  const Complex big = 0.5 * (s.s1 + root);
  const Complex small = s.s2 / big;  // big != 0 because |disc| > 0
  Complex a = big;
  Complex b = small;
  if (lex_less(b, a)) std::swap(a, b);
  out.points.push_back({a, b});
  out.points.push_back({b, a});
  return out;
}

double rho(const GPoint& s) noexcept {
  const double denom = 4.0 - std::norm(s.s1);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  const double num = 2.0 * std::abs(s.s1 - std::conj(s.s1) * s.s2) + std::abs(s.s1 * s.s1 - 4.0 * s.s2);
  return num / denom;
}

MembershipReport membership(const GPoint& s, const Tolerances& tol) {
  MembershipReport out;
  const Fiber f = fiber(s, tol);
  out.fiber_radius = std::max(std::abs(f.points.front().l1), std::abs(f.points.front().l2));
  out.rho = rho(s);
  if (std::abs(s.s1) >= 2.0) {
    out.kind = classify_radius(out.fiber_radius, tol.boundary);
    return out;
  }
  out.kind = classify_radius(out.rho, tol.boundary);
  return out;
}

Complex f_s_eval(const GPoint& s, Complex lambda) {
  const Complex denom = 2.0 - lambda * s.s1;
  if (std::abs(denom) <= 4.0 * std::numeric_limits<double>::epsilon()) {
    throw Error(ErrorKind::PoleAtBoundary, "f_s: vanishing denominator 2 - lambda s1");
  }
  return (2.0 * lambda * s.s2 - s.s1) / denom;
}

Complex phi_omega(Complex omega, const GPoint& s) { return f_s_eval(s, omega); }

namespace detail {

CMatrix s_T_unchecked(const GPoint& s, const CMatrix& t, const Tolerances& tol) {
  const Index n = t.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix numerator = 2.0 * s.s2 * t - s.s1 * id;
  const CMatrix resolvent = 2.0 * id - s.s1 * t;
  // numerator and resolvent are both polynomials in t, so they commute.
  return solve_linear(resolvent, numerator, tol);
}

}  // namespace detail

CMatrix s_T(const GPoint& s, const CMatrix& t, const Tolerances& tol) {
  if (t.rows() != t.cols()) throw Error(ErrorKind::InvalidInput, "s_T: operator is not square");
  if (std::abs(s.s1) >= 2.0) throw Error(ErrorKind::OutOfDomain, "s_T: |s1| >= 2");
  if (operator_norm(t) > 1.0 + tol.contraction_slack) {
    throw Error(ErrorKind::NotAContraction, "s_T: ||T|| exceeds 1");
  }
  return detail::s_T_unchecked(s, t, tol);
}

}  // namespace sbpick
