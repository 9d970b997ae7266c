#include "sbpick/spectral.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "sbpick/error.hpp"

namespace sbpick {

namespace {

// Fixed mixing coefficients for S1 + c S2; later entries are only tried when
// an earlier one produces a coincidence.
constexpr std::array<Complex, 5> kMixing{{
    {0.6180339887498949, 0.2360679774997897},
    {-0.4142135623730951, 0.7320508075688772},
    {1.3247179572447460, -0.5436890126920764},
    {0.2679491924311228, 1.1892071150027210},
    {-1.1447298858494002, -0.3819660112501051},
}};

double strictly_lower_max(const CMatrix& m) {
  double worst = 0.0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

double off_diagonal_max(const CMatrix& m) {
  return std::max(strictly_lower_max(m), strictly_lower_max(CMatrix(m.transpose())));
}

void require_interior_spectrum(const std::vector<GPoint>& spectrum) {
  for (const GPoint& g : spectrum) {
    if (!is_interior(g)) throw Error(ErrorKind::OutOfDomain, "joint spectrum is not inside G");
  }
}

}  // namespace

CommutingPair::CommutingPair(CMatrix s1, CMatrix s2, const Tolerances& tol) : s1_(std::move(s1)), s2_(std::move(s2)) {
  if (s1_.rows() != s1_.cols() || s2_.rows() != s2_.cols() || s1_.rows() != s2_.rows() || s1_.rows() == 0) {
    throw Error(ErrorKind::InvalidInput, "commuting pair: matrices must be square of equal size");
  }
  if (!all_finite(s1_) || !all_finite(s2_)) throw Error(ErrorKind::InvalidInput, "commuting pair: non-finite entry");
  commutator_norm_ = operator_norm(CMatrix(s1_ * s2_ - s2_ * s1_));
  if (commutator_norm_ > tol.commutator) {
    throw Error(ErrorKind::InvalidInput, "pair does not commute: ||[S1,S2]|| = " + std::to_string(commutator_norm_));
  }
}

std::vector<GPoint> joint_spectrum(const CommutingPair& p) {
  const double scale = 1.0 + p.s1().norm() + p.s2().norm();
  for (const Complex c : kMixing) {
    const Eigen::ComplexSchur<CMatrix> schur(CMatrix(p.s1() + c * p.s2()));
    const CMatrix& z = schur.matrixU();
    const CMatrix t1 = z.adjoint() * p.s1() * z;
    const CMatrix t2 = z.adjoint() * p.s2() * z;
    if (std::max(strictly_lower_max(t1), strictly_lower_max(t2)) > 1e-8 * scale) continue;
    std::vector<GPoint> out;
    for (Index k = 0; k < p.dim(); ++k) out.push_back({t1(k, k), t2(k, k)});
    return out;
  }
  throw Error(ErrorKind::InvalidInput, "joint_spectrum: no simultaneous triangularization found");
}

SpectralDomainReport spectral_domain_check(const CommutingPair& p, int grid) {
  if (grid < 1) throw Error(ErrorKind::InvalidInput, "spectral_domain_check: grid must be positive");
  require_interior_spectrum(joint_spectrum(p));

  const Index n = p.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  SpectralDomainReport rep;
  rep.grid = grid;
  rep.max_norm = -1.0;
  for (int k = 0; k < grid; ++k) {
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi * k / grid);
    const CMatrix resolvent = 2.0 * id - omega * p.s1();
    CMatrix phi;
    try {
      phi = solve_linear(resolvent, CMatrix(2.0 * omega * p.s2() - p.s1()));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::IllConditioned) {
        throw Error(ErrorKind::SingularResolvent, "2 - omega S1 is singular at grid index " + std::to_string(k));
      }
      throw;
    }
    const double norm = operator_norm(phi);
    if (norm > rep.max_norm) {
      rep.max_norm = norm;
      rep.argmax = omega;
    }
  }
  return rep;
}

CMatrix evaluate_on_pair(const RealizedFunction& f, const CommutingPair& p, const Tolerances& tol) {
  const double scale = 1.0 + p.s1().norm() + p.s2().norm();
  for (const Complex c : kMixing) {
    const Eigen::ComplexEigenSolver<CMatrix> eig(CMatrix(p.s1() + c * p.s2()));
    if (eig.info() != Eigen::Success) continue;
    const CMatrix& v = eig.eigenvectors();
    const Eigen::JacobiSVD<CMatrix> svd(v);
    const RVector& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > tol.max_diagonalizer_condition) continue;

    const CMatrix vinv = solve_linear(v, CMatrix::Identity(p.dim(), p.dim()), tol);
    const CMatrix d1 = vinv * p.s1() * v;
    const CMatrix d2 = vinv * p.s2() * v;
    if (std::max(off_diagonal_max(d1), off_diagonal_max(d2)) > 1e-8 * scale) continue;

    std::vector<GPoint> spectrum;
    for (Index k = 0; k < p.dim(); ++k) spectrum.push_back({d1(k, k), d2(k, k)});
    require_interior_spectrum(spectrum);
    CVector values(p.dim());
    for (Index k = 0; k < p.dim(); ++k) values(k) = f(spectrum[static_cast<std::size_t>(k)]);
    return v * values.asDiagonal() * vinv;
  }
  throw Error(ErrorKind::NotDiagonalizable, "pair is not (well-conditioned) jointly diagonalizable");
}

DiscontinuityReport discontinuity_demo(const DiagonalDefiningFunction& d, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::InvalidInput, "discontinuity_demo: r must lie in (0, 1)");
  if (d.lambdas.empty()) throw Error(ErrorKind::InvalidInput, "discontinuity_demo: empty lambda sequence");
  // Near lambda = omega both entries sit next to a removable pole of f_s at
  // the edge point, so the direct difference is formed in extended precision.
  using LComplex = std::complex<long double>;
  const Complex w = std::conj(d.omega);
  const LComplex lw(w.real(), w.imag());
  const long double lr = r;
  auto f = [](LComplex s1, LComplex s2, LComplex lambda) {
    return (2.0L * lambda * s2 - s1) / (2.0L - lambda * s1);
  };
  DiscontinuityReport rep;
  for (const Complex lambda : d.lambdas) {
    if (!(std::abs(lambda) < 1.0)) throw Error(ErrorKind::InvalidInput, "discontinuity_demo: lambda outside the disc");
    const LComplex ll(lambda.real(), lambda.imag());
    const LComplex diff = f(2.0L * lw, lw * lw, ll) - f(2.0L * lr * lw, lr * lw * lw, ll);
    rep.direct = std::max(rep.direct, static_cast<double>(std::abs(diff)));
    rep.closed_form = std::max(rep.closed_form, (1.0 - r) / std::abs(1.0 - r * lambda * w));
  }
  return rep;
}

std::vector<Complex> adaptive_lambda_grid(Complex omega, double r) {
  const double finest = 10.0 * (1.0 - r) * (1.0 - r);
  std::vector<Complex> out;
  for (int k = 1;; ++k) {
    const double gap = std::pow(10.0, -0.25 * k);
    out.push_back(omega * (1.0 - gap));
    if (gap <= finest || k >= 80) break;
  }
  return out;
}

CommutingPair normal_pair(const std::vector<GPoint>& joint_eigenvalues, std::uint64_t seed) {
  const Index n = static_cast<Index>(joint_eigenvalues.size());
  const CMatrix q = random_unitary(n, seed);
  CVector d1(n);
  CVector d2(n);
  for (Index k = 0; k < n; ++k) {
    d1(k) = joint_eigenvalues[static_cast<std::size_t>(k)].s1;
    d2(k) = joint_eigenvalues[static_cast<std::size_t>(k)].s2;
  }
  return CommutingPair(CMatrix(q * d1.asDiagonal() * q.adjoint()), CMatrix(q * d2.asDiagonal() * q.adjoint()));
}

}  // namespace sbpick
