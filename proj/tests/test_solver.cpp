#include "ucplab/assemble.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace ucplab;

namespace {

// u = exp(y) cos(x): harmonic, and (grad u).n = -u on y = 0 (outward normal
// points down), i.e. a Robin condition with eta = -1.
double exact_robin(const Vec2& p) { return std::exp(p.y()) * std::cos(p.x()); }

SolutionField solve_robin(double h, SolveReport* rep = nullptr,
                          SolveOptions opts = {}) {
  auto mesh = std::make_shared<const Mesh>(build_half_disk(2.0, h));
  CoefficientSet c = CoefficientSet::laplace();
  c.eta = [](const Vec2&) { return -1.0; };
  c.has_eta = true;
  BCSet bc;
  bc.robin_flat = true;
  bc.dirichlet.push_back({BoundaryWhere::arc, exact_robin});
  DiscreteSystem sys = assemble(c, mesh, bc);
  return solve_system(sys, rep, opts);
}

}  // namespace

TEST(Solve, RobinManufacturedConverges) {
  std::vector<double> errs;
  for (double h : {0.4, 0.2, 0.1}) {
    SolveReport rep;
    SolutionField u = solve_robin(h, &rep);
    EXPECT_LE(rep.residual, 1e-10);
    errs.push_back(l2_error(u, exact_robin));
  }
  EXPECT_LT(errs[2], 0.01);
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    double order = std::log2(errs[i] / errs[i + 1]);
    EXPECT_GE(order, 1.8) << "step " << i;
  }
}

TEST(Solve, DirichletLinearDataIsExact) {
  // u = x lies in the P1 space and satisfies the natural flat condition,
  // so the discrete solution reproduces it to solver precision.
  auto mesh = std::make_shared<const Mesh>(build_half_disk(1.0, 0.1));
  BCSet bc;
  bc.dirichlet.push_back({BoundaryWhere::arc, [](const Vec2& p) { return p.x(); }});
  DiscreteSystem sys = assemble(CoefficientSet::laplace(), mesh, bc);
  SolutionField u = solve_system(sys);
  for (std::size_t i = 0; i < mesh->vertices.size(); ++i)
    EXPECT_NEAR(u.nodal()[static_cast<Eigen::Index>(i)], mesh->vertices[i].x(), 1e-12);
}

TEST(Solve, MeanZeroNeumann) {
  // Pure Neumann data g = 2(x^2 - y^2) on the arc, natural on the flat:
  // the compatible solution is x^2 - y^2, which already has zero mean.
  auto mesh = std::make_shared<const Mesh>(build_half_disk(1.0, 0.05));
  BCSet bc;
  bc.neumann.push_back(
      {BoundaryWhere::arc, [](const Vec2& p) { return 2.0 * (p.x() * p.x() - p.y() * p.y()); }});
  AssembleOptions opts;
  opts.mean_zero = true;
  DiscreteSystem sys = assemble(CoefficientSet::laplace(), mesh, bc, opts);
  SolveReport rep;
  SolutionField u = solve_system(sys, &rep);
  EXPECT_LE(rep.residual, 1e-10);

  // the lumped-mass mean is pinned to zero by the multiplier
  double total = 0.0, mass = 0.0;
  for (int t = 0; t < static_cast<int>(mesh->triangles.size()); ++t) {
    double a = mesh->tri_area(t) / 3.0;
    for (int k = 0; k < 3; ++k) {
      total += a * u.nodal()[mesh->triangles[t][k]];
      mass += a;
    }
  }
  EXPECT_NEAR(total / mass, 0.0, 1e-12);
  EXPECT_LT(l2_error(u, [](const Vec2& p) { return p.x() * p.x() - p.y() * p.y(); }), 2e-3);
}

TEST(Solve, MeanZeroConflictsWithDirichlet) {
  auto mesh = std::make_shared<const Mesh>(build_half_disk(1.0, 0.2));
  BCSet bc;
  bc.dirichlet.push_back({BoundaryWhere::arc, [](const Vec2&) { return 0.0; }});
  AssembleOptions opts;
  opts.mean_zero = true;
  EXPECT_THROW(assemble(CoefficientSet::laplace(), mesh, bc, opts), Error);
}

TEST(Solve, IterativeMatchesDirect) {
  SolveReport rd, ri;
  SolutionField ud = solve_robin(0.2, &rd);
  SolveOptions io;
  io.method = SolveMethod::iterative;
  SolutionField ui = solve_robin(0.2, &ri, io);
  EXPECT_LE(ri.residual, 1e-10);
  EXPECT_GT(ri.iterations, 0);
  EXPECT_LT((ud.nodal() - ui.nodal()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Solve, WeakResidualVanishesOnSolution) {
  auto mesh = std::make_shared<const Mesh>(build_half_disk(2.0, 0.2));
  CoefficientSet c = CoefficientSet::laplace();
  c.eta = [](const Vec2&) { return -1.0; };
  c.has_eta = true;
  BCSet bc;
  bc.robin_flat = true;
  bc.dirichlet.push_back({BoundaryWhere::arc, exact_robin});
  DiscreteSystem sys = assemble(c, mesh, bc);
  SolutionField u = solve_system(sys);
  VecX r = weak_residual(c, u, bc);
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Flux, LinearFieldConormal) {
  auto mesh = std::make_shared<const Mesh>(build_half_disk(1.0, 0.1));
  VecX vals(mesh->vertices.size());
  for (std::size_t i = 0; i < mesh->vertices.size(); ++i) vals[i] = mesh->vertices[i].x();
  SolutionField u(mesh, vals);
  CoefficientSet c = CoefficientSet::laplace();
  for (const auto& f : boundary_flux(u, c, BoundaryTag::flat))
    EXPECT_NEAR(f.conormal, 0.0, 1e-13);  // grad u = e_1, n = -e_2
  for (const auto& f : boundary_flux(u, c, BoundaryTag::arc)) {
    // n is the outward normal of the chord; for grad u = e_1 the flux is n_x
    EXPECT_LE(std::abs(f.conormal), 1.0 + 1e-12);
  }
}

TEST(Locator, InterpolatesAndRejects) {
  auto mesh = std::make_shared<const Mesh>(build_half_disk(1.0, 0.08, 1.5));
  VecX vals(mesh->vertices.size());
  for (std::size_t i = 0; i < mesh->vertices.size(); ++i)
    vals[i] = 3.0 * mesh->vertices[i].x() - 2.0 * mesh->vertices[i].y() + 0.5;
  SolutionField u(mesh, vals);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(0.0, 0.95), ut(0.05, kPi - 0.05);
  int hint = -1;
  for (int k = 0; k < 500; ++k) {
    double r = ur(rng), t = ut(rng);
    Vec2 p(r * std::cos(t), r * std::sin(t));
    if (p.y() < 1e-3) continue;
    EXPECT_NEAR(u.value(p, &hint), 3.0 * p.x() - 2.0 * p.y() + 0.5, 1e-12);
    Vec2 g = u.gradient(p, &hint);
    EXPECT_NEAR(g.x(), 3.0, 1e-11);
    EXPECT_NEAR(g.y(), -2.0, 1e-11);
  }
  // boundary points still resolve
  EXPECT_NEAR(u.value(Vec2(0.5, 0.0)), 2.0, 1e-12);
  // far outside -> error
  EXPECT_THROW(u.value(Vec2(2.0, 2.0)), Error);
  EXPECT_THROW(u.value(Vec2(0.5, -0.5)), Error);
}

TEST(SolutionIo, CsvShape) {
  auto mesh = std::make_shared<const Mesh>(build_half_disk(1.0, 0.2));
  VecX vals = VecX::Zero(mesh->vertices.size());
  SolutionField u(mesh, vals);
  std::ostringstream os;
  u.write_csv(os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "vertex_index,x,y,value");
  int lines = 0;
  for (std::string line; std::getline(is, line);) ++lines;
  EXPECT_EQ(lines, static_cast<int>(mesh->vertices.size()));
}

TEST(Quadrature, GaussRulesIntegrateExactly) {
  // order n integrates polynomials of degree 2n-1 on [-1, 1]
  for (int n : {1, 2, 4, 8, 16}) {
    const GaussRule& g = gauss_legendre(n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) wsum += g.weights[i];
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    double integral = 0.0;  // of x^(2n-2), exact value 2/(2n-1)
    for (int i = 0; i < n; ++i)
      integral += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
    EXPECT_NEAR(integral, 2.0 / (2 * n - 1), 1e-13) << n;
    for (int i = 0; i < n; ++i) EXPECT_NEAR(g.nodes[i], -g.nodes[n - 1 - i], 1e-15);
  }
  EXPECT_THROW(gauss_legendre(0), Error);
  EXPECT_THROW(gauss_legendre(1000), Error);
}
