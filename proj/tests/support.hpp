#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sbpick/error.hpp"
#include "sbpick/geometry.hpp"
#include "sbpick/numerics.hpp"

namespace sbpick::testing {

inline Complex random_disc(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
}

inline GPoint random_interior(std::mt19937_64& rng, double radius = 0.95) {
  return pi_map({random_disc(rng, radius), random_disc(rng, radius)});
}

inline CMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  const CMatrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

// Spectral norm through Eigen's SVD, independent of operator_norm.
inline double svd_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

// Random contraction scaled to norm u in [0, 1].
inline CMatrix random_contraction(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const CMatrix m = random_matrix(n, n, rng);
  return m * (unit(rng) / svd_norm(m));
}

// Pseudo-hyperbolic distance on the disc.
inline double pseudo_hyperbolic(Complex a, Complex b) {
  return std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
}

// Smallest max-coordinate pseudo-hyperbolic distance between fiber points of
// two G-points. A bidisc Schur function cannot expand this distance.
inline double lifted_distance(const GPoint& s, const GPoint& t) {
  double best = INFINITY;
  for (const BidiscPoint& a : fiber(s).points) {
    for (const BidiscPoint& b : fiber(t).points) {
      best = std::min(best, std::max(pseudo_hyperbolic(a.l1, b.l1), pseudo_hyperbolic(a.l2, b.l2)));
    }
  }
  return best;
}

// sup over an equispaced circle grid of |f_s|.
inline double grid_sup_fs(const GPoint& s, int grid) {
  double best = 0.0;
  for (int k = 0; k < grid; ++k) best = std::max(best, std::abs(f_s_eval(s, std::polar(1.0, 2.0 * std::numbers::pi * k / grid))));
  return best;
}

}  // namespace sbpick::testing

// Asserts that `stmt` throws sbpick::Error of the given kind.
#define EXPECT_ERROR_KIND(stmt, expected_kind)                                   \
  do {                                                                           \
    bool sbpick_thrown = false;                                                  \
    try {                                                                        \
      (void)(stmt);                                                              \
    } catch (const ::sbpick::Error& sbpick_e) {                                  \
      sbpick_thrown = true;                                                      \
      EXPECT_EQ(sbpick_e.kind(), expected_kind) << sbpick_e.what();              \
    }                                                                            \
    EXPECT_TRUE(sbpick_thrown) << "expected an sbpick::Error from " #stmt;       \
  } while (0)
