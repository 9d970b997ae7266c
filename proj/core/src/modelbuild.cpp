#include "sbpick/modelbuild.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "sbpick/error.hpp"

namespace sbpick {

namespace {

// Gram vectors from a factor F with F F^* = a; padded to one zero row so the
// model space is never empty.
CMatrix gram_vectors(const HermitianMatrix& a, double rank_tol) {
  const CMatrix f = psd_factor(a, rank_tol);
  if (f.cols() == 0) return CMatrix::Zero(1, a.dim());
  return f.adjoint();
}

}  // namespace

BidiscModel bidisc_model_from_certificate(const LiftedProblem& lp, const PickCertificate& c, double rank_tol) {
  if (c.a1.dim() != static_cast<Index>(lp.size()) || c.a2.dim() != static_cast<Index>(lp.size())) {
    throw Error(ErrorKind::InvalidInput, "certificate dimension does not match the lifted problem");
  }
  if (rank_tol < 0.0) rank_tol = std::max(1e-13, 2.0 * std::max(0.0, -c.min_eig));
  return BidiscModel{lp, gram_vectors(c.a1, rank_tol), gram_vectors(c.a2, rank_tol)};
}

double bidisc_model_residual(const BidiscModel& bm) {
  const CMatrix lhs = pick_kernel(bm.lifted);
  const CMatrix rhs = coordinate_kernel(bm.lifted, 1).cwiseProduct(bm.u1.adjoint() * bm.u1) +
                      coordinate_kernel(bm.lifted, 2).cwiseProduct(bm.u2.adjoint() * bm.u2);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

LurkingIsometry fit_lurking_isometry(const CMatrix& from, const CMatrix& to, double rel_rank) {
  if (from.cols() != to.cols()) throw Error(ErrorKind::InvalidInput, "lurking isometry: family sizes differ");
  LurkingIsometry out;
  if (from.cols() == 0 || from.norm() == 0.0) {
    out.basis = CMatrix(from.rows(), 0);
    out.image = CMatrix(to.rows(), 0);
    out.fit_residual = to.cols() > 0 ? to.colwise().norm().maxCoeff() : 0.0;
    return out;
  }
  const Eigen::JacobiSVD<CMatrix> svd(from, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > rel_rank * sv(0)) ++rank;

  out.basis = svd.matrixU().leftCols(rank);
  // from = basis * diag(sv) * V^*, so the least-squares image of the basis is
  // to * V * diag(sv)^{-1}.
  const RVector inv = sv.head(rank).cwiseInverse();
  const CMatrix fitted = to * svd.matrixV().leftCols(rank) * inv.cast<Complex>().asDiagonal();
  out.gramian_defect = isometry_defect(fitted);
  out.image = nearest_isometry(fitted);
  out.isometry_defect = isometry_defect(out.image);
  const CMatrix mapped = out.image * (out.basis.adjoint() * from);
  out.fit_residual = (mapped - to).colwise().norm().maxCoeff();
  return out;
}

CMatrix stacked_vectors(const BidiscModel& bm) {
  const Index m = static_cast<Index>(bm.lifted.size());
  const Index r1 = bm.u1.rows();
  const Index r2 = bm.u2.rows();
  CMatrix v(r1 + r2, m);
  for (Index k = 0; k < m; ++k) {
    const Index sk = static_cast<Index>(bm.lifted.partner[static_cast<std::size_t>(k)]);
    v.col(k).head(r1) = bm.u1.col(k);
    v.col(k).tail(r2) = bm.u2.col(sk);
  }
  return v;
}

DifferenceFamilies difference_families(const BidiscModel& bm) {
  const CMatrix v = stacked_vectors(bm);
  const Index m = v.cols();
  DifferenceFamilies out{CMatrix(v.rows(), m), CMatrix(v.rows(), m)};
  for (Index k = 0; k < m; ++k) {
    const std::size_t uk = static_cast<std::size_t>(k);
    const Index sk = static_cast<Index>(bm.lifted.partner[uk]);
    const BidiscPoint& lam = bm.lifted.nodes[uk];
    out.differences.col(k) = v.col(k) - v.col(sk);
    out.weighted.col(k) = lam.l1 * v.col(k) - lam.l2 * v.col(sk);
  }
  return out;
}

Symmetrized symmetrize(const BidiscModel& bm, const Tolerances& tol) {
  const LiftedProblem& lp = bm.lifted;
  const Index m = static_cast<Index>(lp.size());
  for (Index k = 0; k < m; ++k) {
    const std::size_t uk = static_cast<std::size_t>(k);
    const std::size_t sk = lp.partner[uk];
    if (lp.partner[sk] != uk || !(lp.nodes[sk] == lp.nodes[uk].transposed()) ||
        lp.targets[sk] != lp.targets[uk]) {
      throw Error(ErrorKind::InvalidInput, "symmetrize: lifted nodes are not closed under transposition");
    }
  }

  Symmetrized out;
  SymmetrizationReport& rep = out.report;
  const CMatrix v = stacked_vectors(bm);
  const Index n_space = v.rows();
  const DifferenceFamilies fam = difference_families(bm);

  rep.gram_mismatch = m > 0 ? (fam.differences.adjoint() * fam.differences -
                               fam.weighted.adjoint() * fam.weighted).cwiseAbs().maxCoeff()
                            : 0.0;
  if (rep.gram_mismatch > tol.gram_mismatch) {
    throw Error(ErrorKind::SymmetrizationFailed,
                "difference Gramians disagree by " + std::to_string(rep.gram_mismatch));
  }

  // L on span{v_k - v_sk}, then U = L on the span plus a pairing of the
  // orthocomplements of domain and range.
  const LurkingIsometry iso = fit_lurking_isometry(fam.differences, fam.weighted, tol.span_rank);
  rep.domain_rank = iso.basis.cols();
  rep.fit_residual = iso.fit_residual;
  rep.isometry_defect = 0.0;
  for (Index c = 0; c < iso.image.cols(); ++c) {
    rep.isometry_defect = std::max(rep.isometry_defect, std::abs(iso.image.col(c).norm() - 1.0));
  }
  const CMatrix dom_perp = orthonormal_complement(iso.basis);
  const CMatrix ran_perp = orthonormal_complement(iso.image);
  CMatrix u = iso.image * iso.basis.adjoint() + ran_perp * dom_perp.adjoint();
  rep.unitarity_defect = isometry_defect(u);
  if (rep.unitarity_defect > tol.unitarity) {
    throw Error(ErrorKind::SymmetrizationFailed, "unitary extension lost unitarity");
  }

  // w_k = (U - l2_k)^{-1} v_k; both fiber points must give the same vector.
  const CMatrix id = CMatrix::Identity(n_space, n_space);
  CMatrix w(n_space, m);
  for (Index k = 0; k < m; ++k) {
    const Complex l2 = lp.nodes[static_cast<std::size_t>(k)].l2;
    w.col(k) = solve_linear(u - l2 * id, v.col(k), tol);
  }
  rep.fiber_consistency = 0.0;
  for (Index k = 0; k < m; ++k) {
    const Index sk = static_cast<Index>(lp.partner[static_cast<std::size_t>(k)]);
    rep.fiber_consistency = std::max(rep.fiber_consistency, (w.col(k) - w.col(sk)).norm());
  }

  // The symmetrized kernel factors as
  //   (1 - t1 U^*/2)^* (1 - t_T^* s_T) (1 - s1 U^*/2)  with T = U^*,
  // so the model operator is the adjoint of the extension.
  const std::size_t n = lp.source_nodes.size();
  GModel& gm = out.model;
  gm.T = u.adjoint();
  gm.nodes = lp.source_nodes;
  gm.v = CMatrix(n_space, static_cast<Index>(n));
  std::vector<bool> seen(n, false);
  for (Index k = 0; k < m; ++k) {
    const std::size_t j = lp.origin[static_cast<std::size_t>(k)];
    if (seen[j]) continue;
    seen[j] = true;
    const Complex s1 = lp.source_nodes[j].s1;
    gm.v.col(static_cast<Index>(j)) = w.col(k) - 0.5 * s1 * (gm.T * w.col(k));
  }
  gm.residual = verify_gmodel(gm, lp.source_targets).residual;
  return out;
}

GModelReport verify_gmodel(const GModel& gm, const std::vector<Complex>& targets, double tol) {
  const Index n = static_cast<Index>(gm.nodes.size());
  if (gm.v.cols() != n || static_cast<Index>(targets.size()) != n || gm.v.rows() != gm.T.rows() ||
      gm.T.rows() != gm.T.cols()) {
    throw Error(ErrorKind::InvalidInput, "verify_gmodel: inconsistent dimensions");
  }
  CMatrix sv(gm.v.rows(), n);
  for (Index j = 0; j < n; ++j) {
    sv.col(j) = detail::s_T_unchecked(gm.nodes[static_cast<std::size_t>(j)], gm.T, default_tolerances()) * gm.v.col(j);
  }
  const CMatrix rhs = gm.v.adjoint() * gm.v - sv.adjoint() * sv;
  GModelReport rep;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Complex lhs = 1.0 - std::conj(targets[static_cast<std::size_t>(i)]) * targets[static_cast<std::size_t>(j)];
      rep.residual = std::max(rep.residual, std::abs(lhs - rhs(i, j)));
    }
  }
  rep.pass = rep.residual <= tol;
  return rep;
}

SpectralDecomposition spectral_decompose(const CMatrix& t, const Tolerances& tol) {
  if (t.rows() != t.cols() || t.rows() == 0) throw Error(ErrorKind::InvalidInput, "spectral_decompose: bad shape");
  if (isometry_defect(t) > tol.unitarity) throw Error(ErrorKind::NotUnitary, "spectral_decompose: T is not unitary");

  // A normal matrix has a diagonal Schur form, so the Schur vectors are an
  // orthonormal eigenbasis even inside eigenvalue clusters.
  const Eigen::ComplexSchur<CMatrix> schur(t);
  const CMatrix& z = schur.matrixU();
  const CMatrix& r = schur.matrixT();
  const Index n = t.rows();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto angle = [&](Index k) { return std::arg(r(k, k)); };
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return angle(a) < angle(b); });

  std::vector<std::vector<Index>> groups;
  for (const Index k : order) {
    if (!groups.empty() && std::abs(r(k, k) - r(groups.back().back(), groups.back().back())) <= tol.eigen_cluster_gap) {
      groups.back().push_back(k);
    } else {
      groups.push_back({k});
    }
  }
  // The angle sort is cut at -pi; merge a cluster straddling the cut.
  if (groups.size() > 1 &&
      std::abs(r(groups.front().front(), groups.front().front()) - r(groups.back().back(), groups.back().back())) <=
          tol.eigen_cluster_gap) {
    groups.front().insert(groups.front().end(), groups.back().begin(), groups.back().end());
    groups.pop_back();
  }

  SpectralDecomposition sd;
  for (const auto& g : groups) {
    Complex mean = 0.0;
    CMatrix basis(n, static_cast<Index>(g.size()));
    for (std::size_t c = 0; c < g.size(); ++c) {
      mean += r(g[c], g[c]);
      basis.col(static_cast<Index>(c)) = z.col(g[c]);
    }
    sd.eigenvalues.push_back(mean / std::abs(mean));
    sd.projections.push_back(basis * basis.adjoint());
  }
  return sd;
}

double identity_check(const SpectralDecomposition& sd, const CMatrix& t_op, const GPoint& s, const GPoint& t) {
  const Index n = t_op.rows();
  const CMatrix st = s_T(s, t_op);
  const CMatrix tt = s_T(t, t_op);
  CMatrix lhs = CMatrix::Identity(n, n) - tt.adjoint() * st;
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    const Complex omega = sd.eigenvalues[k];
    lhs -= (1.0 - std::conj(phi_omega(omega, t)) * phi_omega(omega, s)) * sd.projections[k];
  }
  return operator_norm(lhs);
}

}  // namespace sbpick
