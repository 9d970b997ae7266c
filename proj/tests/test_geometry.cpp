#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "sbpick/geometry.hpp"
#include "sbpick/realize.hpp"
#include "support.hpp"

namespace sbpick {
namespace {

using testing::random_contraction;
using testing::random_disc;
using testing::random_interior;
using testing::svd_norm;

constexpr double kPi = std::numbers::pi;

TEST(PiMap, Examples) {
  EXPECT_EQ(pi_map({0.0, 0.0}), (GPoint{0.0, 0.0}));
  const Complex a(0.3, -0.2);
  const GPoint d = pi_map({a, a});
  EXPECT_EQ(d.s1, 2.0 * a);
  EXPECT_EQ(d.s2, a * a);
  const GPoint s = pi_map({0.4, 0.5});
  EXPECT_NEAR(std::abs(s.s1 - 0.9), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.s2 - 0.2), 0.0, 1e-15);
}

TEST(PiMap, SymmetricUnderTransposition) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 50; ++k) {
    const BidiscPoint mu{random_disc(rng), random_disc(rng)};
    EXPECT_EQ(pi_map(mu), pi_map(mu.transposed()));
  }
}

TEST(Fiber, Examples) {
  const Fiber origin = fiber({0.0, 0.0});
  ASSERT_EQ(origin.points.size(), 1u);
  EXPECT_TRUE(origin.double_root);
  EXPECT_EQ(origin.points[0], (BidiscPoint{0.0, 0.0}));

  const Fiber square = fiber({1.0, 0.25});
  ASSERT_EQ(square.points.size(), 1u);
  EXPECT_TRUE(square.double_root);
  EXPECT_NEAR(std::abs(square.points[0].l1 - 0.5), 0.0, 1e-12);

  const Fiber two = fiber({0.9, 0.2});
  ASSERT_EQ(two.points.size(), 2u);
  EXPECT_FALSE(two.double_root);
  EXPECT_NEAR(std::abs(two.points[0].l1 - 0.4), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(two.points[0].l2 - 0.5), 0.0, 1e-14);
  EXPECT_EQ(two.points[1], two.points[0].transposed());
}

TEST(Fiber, RoundTripsThroughPiMap) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const BidiscPoint mu{random_disc(rng, 1.5), random_disc(rng, 1.5)};
    const GPoint s = pi_map(mu);
    const Fiber f = fiber(s);
    for (const BidiscPoint& p : f.points) {
      const GPoint back = pi_map(p);
      EXPECT_LE(std::max(std::abs(back.s1 - s.s1), std::abs(back.s2 - s.s2)), 1e-12);
    }
    // The fiber recovers {mu, mu^sigma} as a set.
    const double d0 = std::abs(f.points[0].l1 - mu.l1) + std::abs(f.points[0].l2 - mu.l2);
    const double d1 = std::abs(f.points[0].l1 - mu.l2) + std::abs(f.points[0].l2 - mu.l1);
    EXPECT_LE(std::min(d0, d1), 1e-10);
  }
}

TEST(Fiber, StableForTinyProducts) {
  // Naive (s1 - sqrt(disc)) / 2 cancels here; the product formula does not.
  const GPoint s{1.0, 1e-12};
  const Fiber f = fiber(s);
  ASSERT_EQ(f.points.size(), 2u);
  const Complex small = std::abs(f.points[0].l1) < std::abs(f.points[0].l2) ? f.points[0].l1 : f.points[0].l2;
  EXPECT_NEAR(std::abs(small - 1e-12) / 1e-12, 0.0, 1e-10);
}

TEST(Membership, Examples) {
  const MembershipReport origin = membership({0.0, 0.0});
  EXPECT_EQ(origin.kind, Membership::Interior);
  EXPECT_EQ(origin.rho, 0.0);

  EXPECT_EQ(membership({2.0, 1.0}).kind, Membership::Boundary);

  const MembershipReport quarter = membership({1.0, 0.25});
  EXPECT_EQ(quarter.kind, Membership::Interior);
  EXPECT_NEAR(quarter.rho, 0.5, 1e-15);

  EXPECT_EQ(membership({3.0, 2.0}).kind, Membership::Exterior);  // fiber {1, 2}
  EXPECT_EQ(membership({0.0, 1.0}).kind, Membership::Boundary);  // fiber {i, -i}
  EXPECT_EQ(membership({0.0, 1.5}).kind, Membership::Exterior);
}

TEST(Membership, AgreesWithFiberTest) {
  std::mt19937_64 rng(12);
  int interior = 0;
  int exterior = 0;
  for (int k = 0; k < 2000; ++k) {
    const BidiscPoint mu{random_disc(rng, 1.3), random_disc(rng, 1.3)};
    const double radius = std::max(std::abs(mu.l1), std::abs(mu.l2));
    if (std::abs(radius - 1.0) < 1e-6) continue;
    const Membership kind = membership(pi_map(mu)).kind;
    EXPECT_EQ(kind, radius < 1.0 ? Membership::Interior : Membership::Exterior) << mu.l1 << " " << mu.l2;
    (radius < 1.0 ? interior : exterior)++;
  }
  EXPECT_GT(interior, 100);
  EXPECT_GT(exterior, 100);
}

TEST(Rho, MatchesCircleGridMaximum) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 200; ++k) {
    const GPoint s = random_interior(rng);
    const double r = rho(s);
    EXPECT_LT(r, 1.0);
    const double grid = testing::grid_sup_fs(s, 512);
    EXPECT_LE(grid, r + 1e-12);
    EXPECT_NEAR(grid, r, 1e-3);
  }
  EXPECT_NEAR(testing::grid_sup_fs({1.0, 0.25}, 512), 0.5, 1e-3);
  EXPECT_EQ(rho({2.0, 1.0}), INFINITY);
}

TEST(PhiOmega, Examples) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(phi_omega(std::polar(1.0, 2.0 * kPi * k / 10.0), {0.0, 0.0}), 0.0);
  for (double r : {0.1, 0.5, 0.9}) EXPECT_NEAR(std::abs(phi_omega(1.0, {2.0 * r, r * r}) + r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(phi_omega(-1.0, {0.0, 0.5}) + 0.5), 0.0, 1e-15);
  EXPECT_ERROR_KIND(phi_omega(1.0, {2.0, 1.0}), ErrorKind::PoleAtBoundary);
}

TEST(PhiOmega, MapsInteriorIntoDisc) {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 500; ++k) {
    const GPoint s = random_interior(rng, 0.999);
    const Complex omega = std::polar(1.0, 2.0 * kPi * (k / 500.0));
    EXPECT_LT(std::abs(phi_omega(omega, s)), 1.0);
  }
}

TEST(FsEval, Examples) {
  const GPoint s{Complex(0.3, 0.1), Complex(-0.2, 0.05)};
  EXPECT_EQ(f_s_eval(s, 0.0), -s.s1 / 2.0);
  EXPECT_EQ(f_s_eval({0.0, 0.0}, Complex(0.7, 0.2)), 0.0);
  const Complex omega = std::polar(1.0, 1.1);
  EXPECT_EQ(f_s_eval(s, omega), phi_omega(omega, s));
  EXPECT_ERROR_KIND(f_s_eval({1.0, 0.0}, 2.0), ErrorKind::PoleAtBoundary);
}

TEST(ST, Examples) {
  const GPoint s{Complex(0.3, 0.4), Complex(0.1, -0.2)};
  const CMatrix zero = s_T(s, CMatrix::Zero(3, 3));
  EXPECT_LE((zero - (-s.s1 / 2.0) * CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);

  const CMatrix one = s_T(s, CMatrix::Identity(1, 1));
  EXPECT_NEAR(std::abs(one(0, 0) - phi_omega(1.0, s)), 0.0, 1e-15);

  std::mt19937_64 rng(16);
  const CMatrix t = random_contraction(4, rng);
  EXPECT_LE(svd_norm(s_T({0.9, 0.2}, t)), rho({0.9, 0.2}) + 1e-10);
  EXPECT_LT(rho({0.9, 0.2}), 1.0);
}

TEST(ST, Errors) {
  EXPECT_ERROR_KIND(s_T({0.0, 0.0}, 2.0 * CMatrix::Identity(2, 2)), ErrorKind::NotAContraction);
  EXPECT_ERROR_KIND(s_T({2.0, 1.0}, CMatrix::Identity(2, 2)), ErrorKind::OutOfDomain);
}

TEST(ST, VonNeumannBound) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 300; ++k) {
    const GPoint s = random_interior(rng, 0.99);
    const Index n = 1 + k % 8;
    const CMatrix t = k % 3 == 0 ? random_unitary(n, 100 + static_cast<std::uint64_t>(k)) : random_contraction(n, rng);
    EXPECT_LE(svd_norm(s_T(s, t)), rho(s) + 1e-10);
  }
}

TEST(ST, DiagonalUnitaryGivesPhiValues) {
  const GPoint s{Complex(-0.4, 0.3), Complex(0.2, 0.1)};
  CVector omegas(4);
  omegas << std::polar(1.0, 0.3), std::polar(1.0, 2.0), -1.0, Complex(0.0, 1.0);
  const CMatrix st = s_T(s, CMatrix(omegas.asDiagonal()));
  for (Index k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(st(k, k) - phi_omega(omegas(k), s)), 0.0, 1e-15);
  EXPECT_LE((st - CMatrix(st.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace sbpick
