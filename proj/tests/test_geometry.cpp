#include "ucplab/geometry.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <random>

using namespace ucplab;

TEST(Cutoff, SmoothstepBounds) {
  EXPECT_DOUBLE_EQ(cutoff_c2(-1.0, 0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_c2(0.0, 0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_c2(1.0, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(cutoff_c2(2.0, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(cutoff_c2(0.5, 0.0, 1.0), 0.5);
  // C^2: derivative vanishes at both ends
  EXPECT_DOUBLE_EQ(cutoff_c2_deriv(0.0, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(cutoff_c2_deriv(1.0, 0.0, 1.0), 0.0);
  for (double s : {0.1, 0.35, 0.8}) {
    double h = 1e-6;
    double fd = (cutoff_c2(s + h, 0.0, 1.0) - cutoff_c2(s - h, 0.0, 1.0)) / (2 * h);
    EXPECT_NEAR(cutoff_c2_deriv(s, 0.0, 1.0), fd, 1e-8);
  }
  // scaled window
  EXPECT_DOUBLE_EQ(cutoff_c2(0.1, 0.1, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_c2(0.5, 0.1, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(cutoff_c2(0.3, 0.1, 0.5), 0.5);
}

TEST(ThetaMatrix, RowsKillLastColumn) {
  Mat2 A;
  A << 1.0, 0.5, 0.5, 1.0;
  MatX Th = theta_matrix(A);
  ASSERT_EQ(Th.rows(), 2);
  // Theta_{id} = -a_{id} / a_{dd} for i < d, last row = e_d
  EXPECT_DOUBLE_EQ(Th(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(Th(0, 1), -0.5);
  EXPECT_DOUBLE_EQ(Th(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(Th(1, 1), 1.0);
}

TEST(NormalizingMap, KnownExample) {
  Mat2 A;
  A << 1.0, 0.5, 0.5, 1.0;
  LinearChange psi = normalizing_map(A);
  MatX M = psi.matrix();
  double s3 = std::sqrt(3.0);
  EXPECT_NEAR(M(0, 0), 2.0 / s3, 1e-14);
  EXPECT_NEAR(M(0, 1), -1.0 / s3, 1e-14);
  EXPECT_NEAR(M(1, 0), 0.0, 0.0);
  EXPECT_NEAR(M(1, 1), 1.0, 1e-14);
}

TEST(NormalizingMap, RandomSpdMatrices) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      MatX G(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = uni(rng);
      MatX A = G * G.transpose() + 0.3 * MatX::Identity(d, d);
      LinearChange psi = normalizing_map(A);
      MatX M = psi.matrix();
      // Psi A Psi^T = I
      EXPECT_LT((M * A * M.transpose() - MatX::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
      // last row = (0, ..., 0, a_dd^{-1/2}): the half-space is preserved
      for (int j = 0; j + 1 < d; ++j) EXPECT_NEAR(M(d - 1, j), 0.0, 1e-12);
      EXPECT_NEAR(M(d - 1, d - 1), 1.0 / std::sqrt(A(d - 1, d - 1)), 1e-12);
    }
  }
}

TEST(NormalizingMap, RejectsNonSpd) {
  Mat2 A;
  A << 1.0, 2.0, 2.0, 1.0;  // indefinite
  EXPECT_THROW(normalizing_map(MatX(A)), Error);
}

TEST(LinearChange, InverseRoundTrip) {
  MatX M(2, 2);
  M << 2.0, 1.0, 0.0, 3.0;
  LinearChange lc(M);
  Vec2 p(0.7, -1.2);
  Vec2 q = lc.apply(p);
  EXPECT_LT((lc.apply_inverse(q) - p).norm(), 1e-14);
  EXPECT_DOUBLE_EQ(lc.det(), 6.0);
  MatX S(2, 2);
  S << 1.0, 2.0, 2.0, 4.0;  // rank 1
  EXPECT_THROW(LinearChange{S}, Error);
}

TEST(GraphDomain, BasicGeometry) {
  GraphDomain dom(Expr::parse("0.1*x^2"), 1.0);
  EXPECT_DOUBLE_EQ(dom.height(0.5), 0.025);
  EXPECT_NEAR(dom.slope(0.5), 0.1, 1e-12);
  EXPECT_TRUE(dom.contains(Vec2(0.2, 0.3)));
  EXPECT_FALSE(dom.contains(Vec2(0.2, 0.003)));  // below the graph
  EXPECT_GT(dom.lip, 0.0);
  // phi must vanish at the origin along with its slope
  EXPECT_THROW(GraphDomain(Expr::parse("x"), 1.0), Error);
  EXPECT_THROW(GraphDomain(Expr::parse("1+x^2"), 1.0), Error);
}

TEST(FlatteningMap, RoundTripAndBoundary) {
  GraphDomain dom(Expr::parse("0.1*x^2+0.05*x^3"), 1.0);
  FlatteningMap fl(dom);
  // graph points land on y = 0
  for (double x : {-0.8, -0.3, 0.0, 0.4, 0.9}) {
    Vec2 img = fl.apply(Vec2(x, dom.height(x)));
    EXPECT_NEAR(img.y(), 0.0, 1e-14);
  }
  // interior round trip
  for (double x : {-0.5, 0.1, 0.6})
    for (double dy : {0.05, 0.3, 0.8}) {
      Vec2 p(x, dom.height(x) + dy);
      Vec2 q = fl.apply(p);
      EXPECT_GT(q.y(), 0.0);
      EXPECT_LT((fl.apply_inverse(q) - p).norm(), 1e-9);
    }
}

TEST(FlatteningMap, JacobianMatchesFiniteDifference) {
  GraphDomain dom(Expr::parse("0.15*x^2"), 1.0);
  Mat2 A;
  A << 2.0, 0.3, 0.3, 1.0;
  FlatteningMap fl(dom, FlatteningMap::MatrixField([A](const Vec2&) { return A; }));
  for (Vec2 p : {Vec2(0.3, 0.2), Vec2(-0.5, 0.4), Vec2(0.1, 0.05)}) {
    Mat2 J = fl.jacobian(p);
    const double h = 1e-6;
    for (int j = 0; j < 2; ++j) {
      Vec2 e = Vec2::Zero();
      e[j] = h;
      Vec2 fd = (fl.apply(p + e) - fl.apply(p - e)) / (2 * h);
      EXPECT_NEAR(J(0, j), fd.x(), 2e-6);
      EXPECT_NEAR(J(1, j), fd.y(), 2e-6);
    }
  }
}

TEST(FlatteningMap, StraightensConormal) {
  // With the conormal shear, a flat-boundary conormal a . n maps to a
  // vertical direction at the image point: the transported vector
  // J (a n) must be parallel to e_2 on the graph.
  GraphDomain dom(Expr::parse("0.2*x^2"), 1.0);
  Mat2 A;
  A << 1.5, 0.25, 0.25, 1.0;
  FlatteningMap fl(dom, FlatteningMap::MatrixField([A](const Vec2&) { return A; }));
  for (double x : {-0.4, -0.1, 0.2, 0.5}) {
    Vec2 p(x, dom.height(x));
    double s = dom.slope(x);
    Vec2 n = Vec2(s, -1.0).normalized();  // outward (below the graph)
    Vec2 transported = fl.jacobian(p) * (A * n);
    EXPECT_NEAR(transported.x(), 0.0, 1e-5) << "x = " << x;
    EXPECT_LT(transported.y(), 0.0);
  }
}
