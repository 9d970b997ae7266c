#include "sbpick/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "sbpick/error.hpp"

namespace sbpick {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": matrix is not square");
  }
}

}  // namespace

bool all_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

HermitianMatrix::HermitianMatrix(Index dim) : m_(CMatrix::Zero(dim, dim)) {}

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  require_square(m, "HermitianMatrix");
  if (!all_finite(m)) throw Error(ErrorKind::InvalidInput, "HermitianMatrix: non-finite entry");
  const Index n = m.rows();
  m_.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    m_(j, j) = Complex(m(j, j).real(), 0.0);
    for (Index i = j + 1; i < n; ++i) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  HermitianMatrix h(dim);
  h.m_.setIdentity();
  return h;
}

void HermitianMatrix::set(Index i, Index j, Complex value) {
  if (i == j) {
    m_(i, i) = Complex(value.real(), 0.0);
    return;
  }
  m_(i, j) = value;
  m_(j, i) = std::conj(value);
}

EigenDecomposition herm_eig(const HermitianMatrix& h, const Tolerances& tol) {
  const Index n = h.dim();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "herm_eig: empty matrix");

  CMatrix a = h.matrix();
  CMatrix v = CMatrix::Identity(n, n);

  const double scale = a.norm();
  EigenDecomposition out;

  auto off_norm = [&] {
    double s = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  const double target = kEps * scale;
  while (scale > 0.0 && off_norm() > target) {
    if (sweep == tol.jacobi_max_sweeps) {
      throw Error(ErrorKind::NonConvergence, "herm_eig: Jacobi sweep budget exhausted");
    }
    ++sweep;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex z = a(p, q);
        const double mag = std::abs(z);
        if (mag <= kEps * kEps * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = std::conj(z) / mag;  // e^{-i arg z}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // G = diag(1, phase) * [[c, s], [-s, c]] acting on coordinates (p, q).
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * phase;
        const Complex gqq = c * phase;

        for (Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = Complex(app - t * mag, 0.0);
        a(q, q) = Complex(aqq + t * mag, 0.0);

        for (Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return a(x, x).real() < a(y, y).real(); });

  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  out.sweeps = sweep;
  return out;
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  // Gram matrix on the smaller side.
  const CMatrix gram = m.rows() >= m.cols() ? CMatrix(m.adjoint() * m) : CMatrix(m * m.adjoint());
  const double top = herm_eig(HermitianMatrix(gram)).values.maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

HermitianMatrix psd_project(const HermitianMatrix& h) {
  if (h.dim() == 0) return h;
  const EigenDecomposition e = herm_eig(h);
  const RVector clamped = e.values.cwiseMax(0.0);
  return HermitianMatrix(CMatrix(e.vectors * clamped.cast<Complex>().asDiagonal() * e.vectors.adjoint()));
}

CMatrix psd_factor(const HermitianMatrix& h, double rank_tol) {
  const EigenDecomposition e = herm_eig(h);
  if (e.values(0) < -rank_tol) {
    throw Error(ErrorKind::NotPSD, "psd_factor: eigenvalue " + std::to_string(e.values(0)) +
                                       " below -rank_tol");
  }
  const Index n = h.dim();
  std::vector<Index> kept;
  for (Index k = n - 1; k >= 0; --k) {
    if (e.values(k) > rank_tol) kept.push_back(k);
  }
  CMatrix f(n, static_cast<Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const Index k = kept[c];
    f.col(static_cast<Index>(c)) = e.vectors.col(k) * std::sqrt(e.values(k));
  }
  return f;
}

CMatrix nearest_isometry(const CMatrix& m) {
  if (m.rows() < m.cols()) throw Error(ErrorKind::InvalidInput, "nearest_isometry: rows < cols");
  if (m.cols() == 0) return CMatrix(m.rows(), 0);

  // Q = M (M*M)^{-1/2}; one extra pass with Q*Q absorbs the squaring loss.
  auto inverse_sqrt_apply = [](const CMatrix& x, bool check_rank) {
    const EigenDecomposition e = herm_eig(HermitianMatrix(CMatrix(x.adjoint() * x)));
    const double top = e.values.maxCoeff();
    const double bottom = e.values.minCoeff();
    if (check_rank && (top <= 0.0 || bottom <= 64.0 * kEps * top)) {
      throw Error(ErrorKind::RankDeficient, "nearest_isometry: input is rank deficient");
    }
    RVector inv_sqrt = e.values.cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
    return CMatrix(x * e.vectors * inv_sqrt.cast<Complex>().asDiagonal() * e.vectors.adjoint());
  };

  const CMatrix q = inverse_sqrt_apply(m, true);
  return inverse_sqrt_apply(q, false);
}

CMatrix solve_linear(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
  require_square(a, "solve_linear");
  if (a.rows() != b.rows()) throw Error(ErrorKind::InvalidInput, "solve_linear: dimension mismatch");
  if (a.rows() == 0) return CMatrix(0, b.cols());
  const Eigen::PartialPivLU<CMatrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond * tol.ill_conditioned > 1.0)) {
    throw Error(ErrorKind::IllConditioned,
                "solve_linear: condition estimate " + std::to_string(1.0 / rcond) + " too large");
  }
  return lu.solve(b);
}

CMatrix orthonormal_range(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return CMatrix(m.rows(), 0);
  const Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const RVector& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  while (rank < sv.size() && top > 0.0 && sv(rank) > rel_tol * top) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix orthonormal_complement(const CMatrix& q) {
  const Index n = q.rows();
  const Index k = q.cols();
  if (k == 0) return CMatrix::Identity(n, n);
  if (k >= n) return CMatrix(n, 0);
  const Eigen::HouseholderQR<CMatrix> qr(q);
  const CMatrix full = qr.householderQ() * CMatrix::Identity(n, n);
  return full.rightCols(n - k);
}

double hermitian_defect(const CMatrix& m) {
  require_square(m, "hermitian_defect");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double isometry_defect(const CMatrix& q) {
  if (q.cols() == 0) return 0.0;
  return (q.adjoint() * q - CMatrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace sbpick
