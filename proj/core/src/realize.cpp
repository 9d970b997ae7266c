#include "sbpick/realize.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "sbpick/error.hpp"

namespace sbpick {

namespace {

CMatrix haar_unitary(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  const Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix& r = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

CMatrix Colligation::block() const {
  const Index n = dim();
  CMatrix b(n + 1, n + 1);
  b(0, 0) = A;
  b.block(0, 1, 1, n) = beta.adjoint();
  b.block(1, 0, n, 1) = gamma;
  b.block(1, 1, n, n) = D;
  return b;
}

Colligation Colligation::from_block(const CMatrix& block, CMatrix t) {
  const Index n = block.rows() - 1;
  if (n < 0 || block.cols() != n + 1 || t.rows() != n || t.cols() != n) {
    throw Error(ErrorKind::InvalidInput, "colligation block and T have inconsistent shapes");
  }
  Colligation c;
  c.A = block(0, 0);
  c.beta = block.block(0, 1, 1, n).adjoint();
  c.gamma = block.block(1, 0, n, 1);
  c.D = block.block(1, 1, n, n);
  c.T = std::move(t);
  return c;
}

RealizedFunction::RealizedFunction(Colligation c, const Tolerances& tol) : c_(std::move(c)), tol_(tol) {
  const Index n = c_.T.rows();
  if (c_.T.cols() != n || c_.D.rows() != n || c_.D.cols() != n || c_.beta.size() != n || c_.gamma.size() != n) {
    throw Error(ErrorKind::InvalidInput, "colligation has inconsistent dimensions");
  }
  if (!all_finite(c_.block()) || !all_finite(c_.T)) throw Error(ErrorKind::InvalidInput, "colligation has non-finite entries");
  if (operator_norm(c_.T) > 1.0 + tol_.contraction_slack) {
    throw Error(ErrorKind::NotAContraction, "colligation T is not a contraction");
  }
  if (operator_norm(c_.block()) > 1.0 + tol_.colligation_slack) {
    throw Error(ErrorKind::NotAContraction, "colligation block matrix is not a contraction");
  }
}

Complex RealizedFunction::operator()(const GPoint& s) const {
  if (std::abs(s.s1) >= 2.0 || membership(s, tol_).kind == Membership::Exterior) {
    throw Error(ErrorKind::OutOfDomain, "evaluation point outside the closed symmetrized bidisc");
  }
  const Index n = c_.dim();
  if (n == 0) return c_.A;
  const CMatrix st = detail::s_T_unchecked(s, c_.T, tol_);
  const CMatrix lhs = CMatrix::Identity(n, n) - c_.D * st;
  const CVector x = solve_linear(lhs, c_.gamma, tol_);
  return c_.A + c_.beta.dot(st * x);
}

BuiltColligation build_colligation(const GModel& gm, const std::vector<Complex>& targets, const Tolerances& tol) {
  const Index n = static_cast<Index>(gm.nodes.size());
  const Index dim = gm.dim();
  if (static_cast<Index>(targets.size()) != n || gm.v.cols() != n || gm.v.rows() != dim) {
    throw Error(ErrorKind::InvalidInput, "build_colligation: inconsistent dimensions");
  }

  BuiltColligation out;
  ColligationReport& rep = out.report;

  std::vector<CMatrix> node_ops;
  node_ops.reserve(static_cast<std::size_t>(n));
  CMatrix from(dim + 1, n);
  CMatrix to(dim + 1, n);
  for (Index j = 0; j < n; ++j) {
    node_ops.push_back(s_T(gm.nodes[static_cast<std::size_t>(j)], gm.T, tol));
    from(0, j) = 1.0;
    from.block(1, j, dim, 1) = node_ops.back() * gm.v.col(j);
    to(0, j) = targets[static_cast<std::size_t>(j)];
    to.block(1, j, dim, 1) = gm.v.col(j);
  }
  rep.gram_mismatch = (from.adjoint() * from - to.adjoint() * to).cwiseAbs().maxCoeff();
  if (rep.gram_mismatch > tol.gram_mismatch) {
    throw Error(ErrorKind::ModelInconsistent,
                "realization Gramians disagree by " + std::to_string(rep.gram_mismatch));
  }

  const LurkingIsometry iso = fit_lurking_isometry(from, to, tol.span_rank);
  rep.isometry_defect = iso.isometry_defect;
  rep.fit_residual = iso.fit_residual;
  // Zero on the orthocomplement of the span keeps ||L#|| = 1.
  const CMatrix lsharp = iso.image * iso.basis.adjoint();
  rep.contraction_norm = operator_norm(lsharp);

  out.colligation = Colligation::from_block(lsharp, gm.T);
  const Colligation& c = out.colligation;
  for (Index j = 0; j < n; ++j) {
    const CMatrix lhs = CMatrix::Identity(dim, dim) - c.D * node_ops[static_cast<std::size_t>(j)];
    const CVector rebuilt = solve_linear(lhs, c.gamma, tol);
    rep.reconstruction = std::max(rep.reconstruction, (gm.v.col(j) - rebuilt).norm());
  }
  const RealizedFunction f(out.colligation, tol);
  for (Index j = 0; j < n; ++j) {
    rep.node_residual = std::max(rep.node_residual,
                                 std::abs(f(gm.nodes[static_cast<std::size_t>(j)]) - targets[static_cast<std::size_t>(j)]));
  }
  return out;
}

CMatrix random_unitary(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_unitary(dim, rng);
}

RealizedFunction random_schur(Index dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "random_schur: dim must be positive");
  std::mt19937_64 rng(seed);
  CMatrix t = haar_unitary(dim, rng);
  const CMatrix w = haar_unitary(dim + 1, rng);
  std::uniform_real_distribution<double> scale(0.3, 1.0);
  return RealizedFunction(Colligation::from_block(scale(rng) * w, std::move(t)));
}

double directional_derivative_check(const RealizedFunction& f, const GPoint& s, double step) {
  if (!(rho(s) < 0.9)) throw Error(ErrorKind::OutOfDomain, "derivative check needs rho(s) < 0.9");
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  const std::array<std::array<Complex, 2>, 4> directions{{
      {1.0, 0.0},
      {0.0, 1.0},
      {r, r},
      {r, i * r},
  }};
  auto shifted = [&](const std::array<Complex, 2>& e, Complex h) {
    return GPoint{s.s1 + h * e[0], s.s2 + h * e[1]};
  };
  double worst = 0.0;
  for (const auto& e : directions) {
    const Complex along_real = (f(shifted(e, step)) - f(shifted(e, -step))) / (2.0 * step);
    const Complex along_imag = (f(shifted(e, i * step)) - f(shifted(e, -i * step))) / (2.0 * i * step);
    worst = std::max(worst, std::abs(along_real - along_imag));
  }
  return worst;
}

}  // namespace sbpick
