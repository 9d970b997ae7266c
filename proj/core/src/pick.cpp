#include "sbpick/pick.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <vector>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sbpick/error.hpp"

namespace sbpick {

namespace {

double max_norm_distance(const GPoint& a, const GPoint& b) {
  return std::max(std::abs(a.s1 - b.s1), std::abs(a.s2 - b.s2));
}

void validate_lift(const LiftedProblem& lp) {
  const std::size_t m = lp.nodes.size();
  if (m == 0) throw Error(ErrorKind::InvalidInput, "lifted problem is empty");
  if (lp.targets.size() != m || lp.origin.size() != m || lp.partner.size() != m) {
    throw Error(ErrorKind::InvalidInput, "lifted problem: inconsistent lengths");
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (!lp.nodes[k].interior()) throw Error(ErrorKind::InvalidInput, "lifted node outside the open bidisc");
    if (std::abs(lp.targets[k]) > 1.0 + 1e-12) throw Error(ErrorKind::InvalidInput, "target outside the closed disc");
    if (lp.partner[k] >= m) throw Error(ErrorKind::InvalidInput, "partner index out of range");
  }
}

struct AffineSystem {
  CMatrix c1;
  CMatrix c2;
  CMatrix rhs;
  CMatrix inv_norm;  // 1 / (|c1|^2 + |c2|^2)
};

AffineSystem affine_system(const LiftedProblem& lp, double margin) {
  AffineSystem sys{coordinate_kernel(lp, 1), coordinate_kernel(lp, 2), pick_kernel(lp), {}};
  const Index m = sys.c1.rows();
  sys.inv_norm = CMatrix(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      sys.inv_norm(i, j) = 1.0 / (std::norm(sys.c1(i, j)) + std::norm(sys.c2(i, j)));
    }
    sys.rhs(j, j) -= margin * (sys.c1(j, j) + sys.c2(j, j));
  }
  return sys;
}

void project_affine(const AffineSystem& sys, CMatrix& x1, CMatrix& x2) {
  const Index m = x1.rows();
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      const Complex r = sys.rhs(i, j) - sys.c1(i, j) * x1(i, j) - sys.c2(i, j) * x2(i, j);
      const Complex scaled = r * sys.inv_norm(i, j).real();
      x1(i, j) += std::conj(sys.c1(i, j)) * scaled;
      x2(i, j) += std::conj(sys.c2(i, j)) * scaled;
    }
  }
}

double affine_residual(const AffineSystem& sys, const CMatrix& x1, const CMatrix& x2) {
  return (sys.rhs - sys.c1.cwiseProduct(x1) - sys.c2.cwiseProduct(x2)).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const HermitianMatrix& h) { return herm_eig(h).values(0); }

// Farkas alternative for the affine-cone system. With d_k = Z o conj(c_k),
// every PSD solution satisfies Re<Z, rhs> = <d1, a1> + <d2, a2>, and each
// <d_k, a_k> >= min(0, lambda_min(d_k)) tr(a_k) with tr(a_k) bounded by the
// diagonal equations. A negative bound therefore certifies infeasibility.
// Z is fitted to the displacement between a cone point and its affine
// projection; the return value is the bound divided by ||Z||.
double farkas_bound(const AffineSystem& sys, const CMatrix& d1, const CMatrix& d2) {
  const Index m = d1.rows();
  CMatrix z(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      z(i, j) = (sys.c1(i, j) * d1(i, j) + sys.c2(i, j) * d2(i, j)) * sys.inv_norm(i, j).real();
    }
  }
  const HermitianMatrix zh(z);
  const double scale = zh.matrix().norm();
  if (!(scale > 0.0)) return 0.0;
  const HermitianMatrix e1(CMatrix(zh.matrix().cwiseProduct(sys.c1.conjugate())));
  const HermitianMatrix e2(CMatrix(zh.matrix().cwiseProduct(sys.c2.conjugate())));
  double tau1 = 0.0;
  double tau2 = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double r = std::max(0.0, sys.rhs(i, i).real());
    tau1 += r / sys.c1(i, i).real();
    tau2 += r / sys.c2(i, i).real();
  }
  const double pairing = (zh.matrix().conjugate().cwiseProduct(sys.rhs)).sum().real();
  const double slack = std::max(0.0, -min_eigenvalue(e1)) * tau1 + std::max(0.0, -min_eigenvalue(e2)) * tau2;
  return (pairing + slack) / scale;
}

// PSD projection that diagonalizes in the previous eigenbasis, where the
// iterates of a converging sweep are nearly diagonal and Jacobi needs one or
// two sweeps.
class WarmProjector {
 public:
  explicit WarmProjector(Index dim) : basis_(CMatrix::Identity(dim, dim)) {}

  CMatrix operator()(const CMatrix& z) {
    const EigenDecomposition e = herm_eig(HermitianMatrix(CMatrix(basis_.adjoint() * z * basis_)));
    basis_ = basis_ * e.vectors;
    // Re-orthonormalize now and then; products of rotations drift slowly.
    if (++uses_ % 64 == 0) basis_ = nearest_isometry(basis_);
    const RVector clamped = e.values.cwiseMax(0.0);
    return basis_ * clamped.cast<Complex>().asDiagonal() * basis_.adjoint();
  }

 private:
  CMatrix basis_;
  long uses_ = 0;
};

// Minimises |K - (F1 F1^*) o c1 - (F2 F2^*) o c2| over the factors with
// minimum-norm Gauss-Newton steps, starting from the PSD square roots of the
// current iterate.
std::optional<std::pair<CMatrix, CMatrix>> polish_factors(const AffineSystem& sys, const CMatrix& x1,
                                                          const CMatrix& x2, double tol) {
  const Index m = x1.rows();
  auto root = [&](const CMatrix& x) {
    const EigenDecomposition e = herm_eig(HermitianMatrix(x));
    std::vector<Index> keep;
    for (Index k = 0; k < m; ++k)
      if (e.values(k) > 0.0) keep.push_back(k);
    CMatrix f(m, static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      f.col(static_cast<Index>(c)) = e.vectors.col(keep[c]) * std::sqrt(e.values(keep[c]));
    }
    return f;
  };
  std::array<CMatrix, 2> f{root(x1), root(x2)};
  const std::array<const CMatrix*, 2> coeff{&sys.c1, &sys.c2};

  std::vector<std::pair<Index, Index>> eqs;
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i <= j; ++i) eqs.emplace_back(i, j);
  const Index rows = 2 * static_cast<Index>(eqs.size());

  auto residual = [&] {
    return CMatrix(sys.rhs - sys.c1.cwiseProduct(f[0] * f[0].adjoint()) - sys.c2.cwiseProduct(f[1] * f[1].adjoint()));
  };
  CMatrix r = residual();
  double err = r.cwiseAbs().maxCoeff();
  for (int it = 0; it < 12 && err > 1e-15; ++it) {
    const Index cols = 2 * (f[0].size() + f[1].size());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (std::size_t q = 0; q < eqs.size(); ++q) {
      const auto [i, j] = eqs[q];
      rhs(2 * static_cast<Index>(q)) = r(i, j).real();
      rhs(2 * static_cast<Index>(q) + 1) = r(i, j).imag();
    }
    Index col = 0;
    for (int k = 0; k < 2; ++k) {
      const CMatrix& fk = f[static_cast<std::size_t>(k)];
      const CMatrix& ck = *coeff[static_cast<std::size_t>(k)];
      for (Index b = 0; b < fk.cols(); ++b) {
        for (Index a = 0; a < m; ++a) {
          for (const Complex phase : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
            // d(F F^*) for F(a,b) += phase: row a gets phase conj(F(.,b)),
            // column a gets F(.,b) conj(phase).
            for (std::size_t q = 0; q < eqs.size(); ++q) {
              const auto [i, j] = eqs[q];
              Complex d = 0.0;
              if (i == a) d += phase * std::conj(fk(j, b));
              if (j == a) d += fk(i, b) * std::conj(phase);
              if (d == 0.0) continue;
              d *= ck(i, j);
              jac(2 * static_cast<Index>(q), col) = d.real();
              jac(2 * static_cast<Index>(q) + 1, col) = d.imag();
            }
            ++col;
          }
        }
      }
    }
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(rhs);
    std::array<CMatrix, 2> trial = f;
    col = 0;
    for (auto& fk : trial) {
      for (Index b = 0; b < fk.cols(); ++b)
        for (Index a = 0; a < m; ++a, col += 2) fk(a, b) += Complex(step(col), step(col + 1));
    }
    std::swap(f, trial);
    const CMatrix r_next = residual();
    const double err_next = r_next.cwiseAbs().maxCoeff();
    if (!(err_next < err)) {
      std::swap(f, trial);
      break;
    }
    r = r_next;
    err = err_next;
  }
  if (!(err <= tol)) return std::nullopt;
  return std::make_pair(CMatrix(f[0] * f[0].adjoint()), CMatrix(f[1] * f[1].adjoint()));
}

PickCertificate make_certificate(const LiftedProblem& lp, HermitianMatrix a1, HermitianMatrix a2) {
  PickCertificate c{std::move(a1), std::move(a2), 0.0, 0.0};
  const CertificateReport r = verify_certificate(lp, c, 0.0);
  c.residual = r.residual;
  c.min_eig = std::min(r.min_eig1, r.min_eig2);
  return c;
}

std::optional<FeasibilityResult> unimodular_case(const LiftedProblem& lp, double unimodular_tol) {
  const auto it = std::find_if(lp.targets.begin(), lp.targets.end(),
                               [&](Complex w) { return std::abs(1.0 - std::abs(w)) <= unimodular_tol; });
  if (it == lp.targets.end()) return std::nullopt;
  const Complex anchor = *it;
  double spread = 0.0;
  for (const Complex w : lp.targets) spread = std::max(spread, std::abs(w - anchor));
  FeasibilityResult out;
  if (spread <= unimodular_tol) {
    const Index m = static_cast<Index>(lp.size());
    out.verdict = Verdict::Feasible;
    out.certificate = make_certificate(lp, HermitianMatrix(m), HermitianMatrix(m));
  } else {
    // A Schur function touching the circle at one node is constant there.
    out.verdict = Verdict::Infeasible;
    out.gap = spread;
  }
  return out;
}

constexpr int kStallSweeps = 20;
constexpr int kFarkasInterval = 10;

}  // namespace

void validate(const PickProblem& p, const Tolerances& tol) {
  if (p.nodes.empty()) throw Error(ErrorKind::InvalidInput, "problem has no nodes");
  if (p.nodes.size() != p.targets.size()) {
    throw Error(ErrorKind::InvalidInput, "problem: node and target counts differ");
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    const Complex w = p.targets[j];
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > 1.0 + tol.unimodular) {
      throw Error(ErrorKind::InvalidInput, "target " + std::to_string(j) + " outside the closed disc");
    }
    if (membership(p.nodes[j], tol).kind != Membership::Interior) {
      throw Error(ErrorKind::OutOfDomain, "node " + std::to_string(j) + " is not interior");
    }
    for (std::size_t i = 0; i < j; ++i) {
      if (max_norm_distance(p.nodes[i], p.nodes[j]) <= tol.node_separation) {
        throw Error(ErrorKind::DuplicateNodes,
                    "nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

LiftedProblem lift_problem(const PickProblem& p, FiberOrder order, const Tolerances& tol) {
  validate(p, tol);
  LiftedProblem lp;
  lp.source_nodes = p.nodes;
  lp.source_targets = p.targets;
  for (std::size_t j = 0; j < p.size(); ++j) {
    Fiber f = fiber(p.nodes[j], tol);
    if (order == FiberOrder::Reversed) std::reverse(f.points.begin(), f.points.end());
    const std::size_t base = lp.nodes.size();
    for (std::size_t k = 0; k < f.points.size(); ++k) {
      lp.nodes.push_back(f.points[k]);
      lp.targets.push_back(p.targets[j]);
      lp.origin.push_back(j);
      lp.partner.push_back(f.points.size() == 1 ? base : base + (1 - k));
    }
  }
  return lp;
}

CMatrix pick_kernel(const LiftedProblem& lp) {
  const Index m = static_cast<Index>(lp.size());
  CMatrix k(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i)
      k(i, j) = 1.0 - std::conj(lp.targets[static_cast<std::size_t>(i)]) * lp.targets[static_cast<std::size_t>(j)];
  return k;
}

CMatrix coordinate_kernel(const LiftedProblem& lp, int coordinate) {
  const Index m = static_cast<Index>(lp.size());
  auto coord = [&](Index i) {
    const BidiscPoint& p = lp.nodes[static_cast<std::size_t>(i)];
    return coordinate == 1 ? p.l1 : p.l2;
  };
  CMatrix c(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) c(i, j) = 1.0 - std::conj(coord(i)) * coord(j);
  return c;
}

CertificateReport verify_certificate(const LiftedProblem& lp, const PickCertificate& c, double tol) {
  const Index m = static_cast<Index>(lp.size());
  if (c.a1.dim() != m || c.a2.dim() != m) {
    throw Error(ErrorKind::InvalidInput, "certificate dimension does not match the lifted problem");
  }
  CertificateReport r;
  const CMatrix residual = pick_kernel(lp) - c.a1.matrix().cwiseProduct(coordinate_kernel(lp, 1)) -
                           c.a2.matrix().cwiseProduct(coordinate_kernel(lp, 2));
  r.residual = residual.cwiseAbs().maxCoeff();
  r.min_eig1 = min_eigenvalue(c.a1);
  r.min_eig2 = min_eigenvalue(c.a2);
  r.pass = r.residual <= tol && r.min_eig1 >= -tol && r.min_eig2 >= -tol;
  return r;
}

FeasibilityResult solve_feasibility(const LiftedProblem& lp, const SolverSettings& cfg) {
  validate_lift(lp);
  if (auto special = unimodular_case(lp, default_tolerances().unimodular)) return *special;

  const Index m = static_cast<Index>(lp.size());
  const AffineSystem sys = affine_system(lp, cfg.margin);
  const CMatrix shift = cfg.margin * CMatrix::Identity(m, m);

  FeasibilityResult out;
  auto accept = [&](const CMatrix& a1, const CMatrix& a2) {
    out.verdict = Verdict::Feasible;
    out.certificate = make_certificate(lp, HermitianMatrix(CMatrix(a1 + shift)), HermitianMatrix(CMatrix(a2 + shift)));
    out.gap = 0.0;
    return out;
  };

  // The affine set needs no Dykstra correction; the cone does.
  CMatrix x1 = CMatrix::Zero(m, m);
  CMatrix x2 = CMatrix::Zero(m, m);
  CMatrix q1 = CMatrix::Zero(m, m);
  CMatrix q2 = CMatrix::Zero(m, m);
  WarmProjector cone1(m);
  WarmProjector cone2(m);
  int next_polish = 1;
  int polish_interval = 20;
  int stalled = 0;

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    CMatrix y1 = x1;
    CMatrix y2 = x2;
    project_affine(sys, y1, y2);

    const CMatrix z1 = HermitianMatrix(CMatrix(y1 + q1)).matrix();
    const CMatrix z2 = HermitianMatrix(CMatrix(y2 + q2)).matrix();
    const CMatrix n1 = cone1(z1);
    const CMatrix n2 = cone2(z2);
    q1 = z1 - n1;
    q2 = z2 - n2;

    const double step = std::sqrt((n1 - x1).squaredNorm() + (n2 - x2).squaredNorm());
    x1 = n1;
    x2 = n2;
    out.sweeps = sweep;

    const double residual = affine_residual(sys, x1, x2);
    if (residual <= cfg.tol) return accept(x1, x2);
    if (cfg.polish && residual <= cfg.polish_threshold && sweep >= next_polish) {
      next_polish = sweep + polish_interval;
      polish_interval *= 2;
      if (auto refined = polish_factors(sys, x1, x2, cfg.tol)) {
        out.polished = true;
        return accept(refined->first, refined->second);
      }
    }
    // Near convergence the affine iterate may already be PSD within tol.
    if (residual <= 1e3 * cfg.tol && sweep % 8 == 0) {
      const HermitianMatrix h1{CMatrix(y1)};
      const HermitianMatrix h2{CMatrix(y2)};
      if (min_eigenvalue(h1) >= -cfg.tol && min_eigenvalue(h2) >= -cfg.tol) return accept(h1.matrix(), h2.matrix());
    }
    if (sweep % kFarkasInterval == 0) {
      CMatrix p1 = x1;
      CMatrix p2 = x2;
      project_affine(sys, p1, p2);
      const double bound = farkas_bound(sys, x1 - p1, x2 - p2);
      if (bound < -cfg.tol) {
        out.gap = std::sqrt((p1 - x1).squaredNorm() + (p2 - x2).squaredNorm());
        out.dual_bound = bound;
        out.verdict = Verdict::Infeasible;
        return out;
      }
    }
    // Dykstra can pause in x while the correction still moves, so a stall
    // has to persist before it counts.
    stalled = step < cfg.stall ? stalled + 1 : 0;
    if (stalled >= kStallSweeps) {
      CMatrix p1 = x1;
      CMatrix p2 = x2;
      project_affine(sys, p1, p2);
      out.gap = std::sqrt((p1 - x1).squaredNorm() + (p2 - x2).squaredNorm());
      if (out.gap > cfg.tol) {
        out.verdict = Verdict::Infeasible;
        return out;
      }
    }
  }
  CMatrix p1 = x1;
  CMatrix p2 = x2;
  project_affine(sys, p1, p2);
  out.gap = std::sqrt((p1 - x1).squaredNorm() + (p2 - x2).squaredNorm());
  out.verdict = Verdict::Inconclusive;
  return out;
}

std::optional<PickCertificate> solve_interior_certificate(const LiftedProblem& lp, double tol,
                                                         int sweeps_per_attempt, double min_relative_margin) {
  validate_lift(lp);
  // a_k >= delta I forces delta (c1_ii + c2_ii) <= 1 - |w_i|^2 on the diagonal.
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lp.size(); ++i) {
    const BidiscPoint& p = lp.nodes[i];
    const double c = (1.0 - std::norm(p.l1)) + (1.0 - std::norm(p.l2));
    bound = std::min(bound, (1.0 - std::norm(lp.targets[i])) / c);
  }
  if (!(bound > 0.0)) return std::nullopt;

  SolverSettings cfg;
  cfg.tol = tol;
  cfg.max_sweeps = sweeps_per_attempt;
  for (double margin = 0.25 * bound; margin >= min_relative_margin * bound; margin *= 0.25) {
    cfg.margin = margin;
    FeasibilityResult r = solve_feasibility(lp, cfg);
    if (r.verdict == Verdict::Feasible) return std::move(r.certificate);
  }
  return std::nullopt;
}

PickCertificate solve_n1_closed_form(const LiftedProblem& lp) {
  validate_lift(lp);
  for (const std::size_t o : lp.origin) {
    if (o != lp.origin.front()) throw Error(ErrorKind::InvalidInput, "closed form needs a single source node");
  }
  const Index m = static_cast<Index>(lp.size());
  const double weight = 0.5 * (1.0 - std::norm(lp.targets.front()));
  const CMatrix c1 = coordinate_kernel(lp, 1);
  const CMatrix c2 = coordinate_kernel(lp, 2);
  CMatrix a1(m, m);
  CMatrix a2(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      a1(i, j) = weight / c1(i, j);
      a2(i, j) = weight / c2(i, j);
    }
  }
  return make_certificate(lp, HermitianMatrix(a1), HermitianMatrix(a2));
}

}  // namespace sbpick
