#include "ucplab/transforms.hpp"

#include <gtest/gtest.h>

using namespace ucplab;

namespace {

double exact_robin(const Vec2& p) { return std::exp(p.y()) * std::cos(p.x()); }

struct RobinSetup {
  std::shared_ptr<const Mesh> mesh;
  CoefficientSet coeffs;
  SolutionField u;
};

RobinSetup make_robin(double h) {
  RobinSetup s;
  s.mesh = std::make_shared<const Mesh>(build_half_disk(2.0, h));
  s.coeffs = CoefficientSet::laplace();
  s.coeffs.eta = [](const Vec2&) { return -1.0; };
  s.coeffs.has_eta = true;
  BCSet bc;
  bc.robin_flat = true;
  bc.dirichlet.push_back({BoundaryWhere::arc, exact_robin});
  DiscreteSystem sys = assemble(s.coeffs, s.mesh, bc);
  s.u = solve_system(sys);
  return s;
}

}  // namespace

TEST(Gauge, RemovesRobinWeight) {
  RobinSetup s = make_robin(0.1);
  GaugeResult g = gauge_transform(s.u, s.coeffs, 1.0);
  EXPECT_LE(g.psi_residual, 1e-10);
  EXPECT_LE(g.compatibility, 1e-8);

  // v = u e^{-psi} pointwise at the vertices
  for (Eigen::Index i = 0; i < s.u.nodal().size(); ++i)
    EXPECT_NEAR(g.v.nodal()[i], s.u.nodal()[i] * std::exp(-g.psi.nodal()[i]), 1e-13);

  // the gauged solution has (numerically) vanishing conormal flux on the
  // flat boundary inside the split ball, while u itself does not
  double res_u = conormal_residual(s.u, s.coeffs, 0.9);
  double res_v = conormal_residual(g.v, g.coefficients, 0.9);
  EXPECT_GT(res_u, 0.5);
  EXPECT_LT(res_v, 0.5 * res_u);

  // gauged problem carries no eta
  EXPECT_FALSE(g.coefficients.has_eta);
}

TEST(Gauge, ConormalResidualDecays) {
  double prev = -1.0;
  for (double h : {0.2, 0.1, 0.05}) {
    RobinSetup s = make_robin(h);
    GaugeResult g = gauge_transform(s.u, s.coeffs, 1.0);
    double res = conormal_residual(g.v, g.coefficients, 0.9);
    if (prev > 0.0) EXPECT_GE(prev / res, 1.5) << h;
    prev = res;
  }
}

TEST(Gauge, PsiHasZeroMean) {
  RobinSetup s = make_robin(0.1);
  GaugeResult g = gauge_transform(s.u, s.coeffs, 1.0);
  double total = 0.0, mass = 0.0;
  const Mesh& m = *s.mesh;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    double a = m.tri_area(t) / 3.0;
    for (int k = 0; k < 3; ++k) {
      total += a * g.psi.nodal()[m.triangles[t][k]];
      mass += a;
    }
  }
  EXPECT_NEAR(total / mass, 0.0, 1e-12);
}

TEST(Gauge, RequiresEta) {
  auto mesh = std::make_shared<const Mesh>(build_half_disk(1.0, 0.2));
  VecX vals = VecX::Ones(mesh->vertices.size());
  SolutionField u(mesh, vals);
  EXPECT_THROW(gauge_transform(u, CoefficientSet::laplace(), 0.5), Error);
}

TEST(Gauge, TransformedCoefficientsKeepEllipticPart) {
  RobinSetup s = make_robin(0.1);
  GaugeResult g = gauge_transform(s.u, s.coeffs, 1.0);
  // principal part is untouched; W gains 2 a grad(psi)
  Vec2 p(0.3, 0.4);
  EXPECT_LT((g.coefficients.A(p) - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  Vec2 w = g.coefficients.W(p);
  Vec2 expected = 2.0 * g.psi.gradient(p);
  EXPECT_NEAR(w.x(), expected.x(), 1e-12);
  EXPECT_NEAR(w.y(), expected.y(), 1e-12);
  // V gains |grad psi|^2 (b = W = 0 here)
  double v = g.coefficients.V(p);
  EXPECT_NEAR(v, g.psi.gradient(p).squaredNorm(), 1e-12);
}

TEST(Reflection, EvenExtensionIsSymmetric) {
  RobinSetup s = make_robin(0.1);
  GaugeResult g = gauge_transform(s.u, s.coeffs, 1.0);
  ReflectedProblem rp = reflect_even_extension(g.v, g.coefficients);
  const Mesh& fm = *rp.full_mesh;
  const Mesh& hm = g.v.mesh();
  // mirror_of maps each upper-mesh vertex to its reflection in the full mesh
  ASSERT_EQ(rp.mirror_of.size(), hm.vertices.size());
  ASSERT_GT(fm.vertices.size(), hm.vertices.size());
  for (std::size_t i = 0; i < hm.vertices.size(); ++i) {
    int j = rp.mirror_of[i];
    ASSERT_GE(j, 0);
    EXPECT_DOUBLE_EQ(hm.vertices[i].x(), fm.vertices[j].x());
    EXPECT_DOUBLE_EQ(hm.vertices[i].y(), -fm.vertices[j].y());
    EXPECT_DOUBLE_EQ(rp.v_ext.nodal()[static_cast<Eigen::Index>(i)],
                     rp.v_ext.nodal()[j]);
  }
}

TEST(Reflection, ResidualSmallAndDecays) {
  std::vector<double> res;
  for (double h : {0.2, 0.1}) {
    RobinSetup s = make_robin(h);
    GaugeResult g = gauge_transform(s.u, s.coeffs, 1.0);
    ReflectedProblem rp = reflect_even_extension(g.v, g.coefficients);
    res.push_back(reflection_residual(rp));
  }
  EXPECT_GE(res[0] / res[1], 1.5);
}

TEST(Reflection, RejectsOffDiagonalOnFlat) {
  RobinSetup s = make_robin(0.2);
  CoefficientSet c = CoefficientSet::laplace();
  c.A = [](const Vec2&) {
    Mat2 a;
    a << 1.0, 0.3, 0.3, 1.0;
    return a;
  };
  c.ell = {0.5, 1.5};
  try {
    reflect_even_extension(s.u, c);
    FAIL() << "expected a12 rejection";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("flatten"), std::string::npos) << e.what();
  }
}

TEST(Reflection, RejectsLiveEta) {
  RobinSetup s = make_robin(0.2);
  try {
    reflect_even_extension(s.u, s.coeffs);  // eta still attached
    FAIL() << "expected eta rejection";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("gauge"), std::string::npos) << e.what();
  }
}
