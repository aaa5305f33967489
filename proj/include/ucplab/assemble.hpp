#pragma once

// P1 finite elements for the bilinear form
//   B(u, phi) = int (a grad u + b u) . grad phi
//             - int (W . grad u + V u) phi
//             - int_flat eta u phi,
// against load L(phi) = int f phi + int_N g phi. Integration by parts shows
// the strong problem solved is D(a grad u + b u) + W grad u + V u = -f with
// (a grad u + b u) . n = eta u on the Robin part and = g on the Neumann part.
//
// Dirichlet constraints are eliminated symmetrically; the pure-Neumann case
// is pinned by a single mass-weighted mean constraint (Lagrange row).

#include "ucplab/core.hpp"
#include "ucplab/fields.hpp"
#include "ucplab/mesh.hpp"
#include "ucplab/solution.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>
#include <optional>
#include <variant>

namespace ucplab {

enum class BoundaryWhere { flat, arc, all };

struct NeumannBC {
  BoundaryWhere where = BoundaryWhere::all;
  ScalarField data;
};

struct DirichletBC {
  BoundaryWhere where = BoundaryWhere::arc;
  ScalarField data;
};

struct BCSet {
  bool robin_flat = false;  // use coefficients.eta on flat edges
  std::vector<NeumannBC> neumann;
  std::vector<DirichletBC> dirichlet;
};

struct AssembleOptions {
  int tri_rule = 3;    // 3 (degree 2) or 7 (degree 5)
  int edge_rule = 2;   // Gauss points per boundary edge
  bool mean_zero = false;
  ScalarField source;  // volume load f, optional
};

namespace femdetail {

struct TriRulePoint {
  double l0, l1, l2, w;
};

inline const std::vector<TriRulePoint>& tri_rule(int n) {
  static const std::vector<TriRulePoint> mid = {
      {0.5, 0.5, 0.0, 1.0 / 3.0}, {0.0, 0.5, 0.5, 1.0 / 3.0}, {0.5, 0.0, 0.5, 1.0 / 3.0}};
  static const std::vector<TriRulePoint> seven = [] {
    std::vector<TriRulePoint> r;
    r.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225});
    double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    for (auto [a, b, w] : {std::tuple{a1, b1, w1}, std::tuple{a2, b2, w2}}) {
      r.push_back({a, b, b, w});
      r.push_back({b, a, b, w});
      r.push_back({b, b, a, w});
    }
    return r;
  }();
  if (n == 3) return mid;
  if (n == 7) return seven;
  throw Error("tri_rule: supported rules are 3 and 7 points");
}

inline bool edge_matches(BoundaryWhere where, BoundaryTag tag) {
  return where == BoundaryWhere::all ||
         (where == BoundaryWhere::flat && tag == BoundaryTag::flat) ||
         (where == BoundaryWhere::arc && tag == BoundaryTag::arc);
}

}  // namespace femdetail

struct DiscreteSystem {
  std::shared_ptr<const Mesh> mesh;
  Eigen::SparseMatrix<double> K;  // unconstrained operator
  VecX F;
  VecX mass;                      // int phi_i
  std::vector<std::pair<int, double>> dirichlet;  // sorted by index
  bool mean_zero = false;

  double weighted_mean(const VecX& u) const { return mass.dot(u) / mass.sum(); }
};

inline DiscreteSystem assemble(const CoefficientSet& c, std::shared_ptr<const Mesh> mesh,
                               const BCSet& bc, const AssembleOptions& opts = {}) {
  const Mesh& m = *mesh;
  const int n = static_cast<int>(m.vertices.size());
  const auto& rule = femdetail::tri_rule(opts.tri_rule);
  const GaussRule& erule = gauss_legendre(opts.edge_rule);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.triangles.size() * 9 + m.boundary.size() * 4);
  VecX F = VecX::Zero(n);
  VecX mass = VecX::Zero(n);

  for (const auto& tr : m.triangles) {
    Vec2 p0 = m.vertices[tr[0]], p1 = m.vertices[tr[1]], p2 = m.vertices[tr[2]];
    double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    double area = 0.5 * det;
    Vec2 g1((p2.y() - p0.y()) / det, (p0.x() - p2.x()) / det);
    Vec2 g2((p0.y() - p1.y()) / det, (p1.x() - p0.x()) / det);
    Vec2 g0 = -g1 - g2;
    const Vec2 grads[3] = {g0, g1, g2};

    double ke[3][3] = {};
    double fe[3] = {};
    for (const auto& q : rule) {
      Vec2 x = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
      double w = q.w * area;
      double lam[3] = {q.l0, q.l1, q.l2};
      Mat2 a = c.A(x);
      Vec2 bv = c.b(x);
      Vec2 wv = c.W(x);
      double vv = c.V(x);
      Vec2 agr[3];
      for (int j = 0; j < 3; ++j) agr[j] = a * grads[j];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double val = agr[j].dot(grads[i]);
          val += bv.dot(grads[i]) * lam[j];
          val -= wv.dot(grads[j]) * lam[i];
          val -= vv * lam[i] * lam[j];
          ke[i][j] += w * val;
        }
        if (opts.source) fe[i] += w * opts.source(x) * lam[i];
      }
    }
    for (int i = 0; i < 3; ++i) {
      mass[tr[i]] += area / 3.0;
      F[tr[i]] += fe[i];
      for (int j = 0; j < 3; ++j) trips.emplace_back(tr[i], tr[j], ke[i][j]);
    }
  }

  // boundary terms
  for (const auto& e : m.boundary) {
    Vec2 a = m.vertices[e.a], b = m.vertices[e.b];
    double len = (b - a).norm();
    bool robin = bc.robin_flat && c.has_eta && e.tag == BoundaryTag::flat;
    for (int q = 0; q < opts.edge_rule; ++q) {
      double t = 0.5 * (erule.nodes[q] + 1.0);
      double w = 0.5 * len * erule.weights[q];
      Vec2 x = a + t * (b - a);
      double lam[2] = {1.0 - t, t};
      int idx[2] = {e.a, e.b};
      if (robin) {
        double eta = c.eta(x);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            trips.emplace_back(idx[i], idx[j], -w * eta * lam[i] * lam[j]);
      }
      for (const auto& nb : bc.neumann) {
        if (!femdetail::edge_matches(nb.where, e.tag)) continue;
        double g = nb.data(x);
        for (int i = 0; i < 2; ++i) F[idx[i]] += w * g * lam[i];
      }
    }
  }

  DiscreteSystem sys;
  sys.mesh = std::move(mesh);
  sys.K.resize(n, n);
  sys.K.setFromTriplets(trips.begin(), trips.end());
  sys.F = std::move(F);
  sys.mass = std::move(mass);
  sys.mean_zero = opts.mean_zero;

  // Dirichlet vertices: every vertex on a matching boundary edge.
  std::map<int, double> fixed;
  for (const auto& db : bc.dirichlet) {
    for (const auto& e : m.boundary) {
      if (!femdetail::edge_matches(db.where, e.tag)) continue;
      for (int v : {e.a, e.b}) fixed.emplace(v, db.data(m.vertices[v]));
    }
  }
  sys.dirichlet.assign(fixed.begin(), fixed.end());
  if (sys.mean_zero && !sys.dirichlet.empty())
    throw Error("assemble: mean-zero constraint requires a pure Neumann problem");
  return sys;
}

enum class SolveMethod { direct, iterative };

struct SolveOptions {
  SolveMethod method = SolveMethod::direct;
  double tol = 1e-13;
  int max_iter = 20000;
  std::optional<VecX> guess;
  double residual_gate = 1e-10;
};

struct SolveReport {
  double residual = 0.0;
  int iterations = 0;
  double multiplier = 0.0;  // Lagrange multiplier of the mean constraint
};

inline SolutionField solve_system(const DiscreteSystem& sys, SolveReport* report = nullptr,
                                  const SolveOptions& opts = {}) {
  const int n = static_cast<int>(sys.F.size());
  std::vector<int> to_free(n, -1);
  std::vector<char> is_fixed(n, 0);
  for (const auto& [i, v] : sys.dirichlet) is_fixed[i] = 1;
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (!is_fixed[i]) to_free[i] = nf++;

  const int extra = sys.mean_zero ? 1 : 0;
  const int dim = nf + extra;

  VecX fixed_vals = VecX::Zero(n);
  for (const auto& [i, v] : sys.dirichlet) fixed_vals[i] = v;

  std::vector<Eigen::Triplet<double>> trips;
  VecX rhs = VecX::Zero(dim);
  for (int i = 0; i < n; ++i)
    if (!is_fixed[i]) rhs[to_free[i]] = sys.F[i];
  for (int col = 0; col < sys.K.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, col); it; ++it) {
      int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
      if (is_fixed[i]) continue;
      if (is_fixed[j]) rhs[to_free[i]] -= it.value() * fixed_vals[j];
      else trips.emplace_back(to_free[i], to_free[j], it.value());
    }
  }
  if (sys.mean_zero) {
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(nf, i, sys.mass[i]);
      trips.emplace_back(i, nf, sys.mass[i]);
    }
  }
  Eigen::SparseMatrix<double> K(dim, dim);
  K.setFromTriplets(trips.begin(), trips.end());

  VecX x(dim);
  int iterations = 0;
  if (opts.method == SolveMethod::direct) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success) throw Error("solve: factorization failed");
    x = lu.solve(rhs);
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
    it.setTolerance(opts.tol);
    it.setMaxIterations(opts.max_iter);
    it.compute(K);
    if (opts.guess) {
      VecX g = VecX::Zero(dim);
      const VecX& gv = *opts.guess;
      if (gv.size() != n) throw Error("solve: guess size mismatch");
      for (int i = 0; i < n; ++i)
        if (!is_fixed[i]) g[to_free[i]] = gv[i];
      x = it.solveWithGuess(rhs, g);
    } else {
      x = it.solve(rhs);
    }
    iterations = static_cast<int>(it.iterations());
    if (it.info() != Eigen::Success && it.error() > opts.tol * 10)
      throw Error("solve: iterative solver stalled at error " + std::to_string(it.error()));
  }

  double rnorm = (K * x - rhs).norm();
  double denom = std::max({rhs.norm(), (K * x).norm(), 1e-300});
  double rel = rnorm / denom;
  if (!(rel <= opts.residual_gate))
    throw Error("solve: relative residual " + std::to_string(rel) + " exceeds gate");

  VecX u(n);
  for (int i = 0; i < n; ++i) u[i] = is_fixed[i] ? fixed_vals[i] : x[to_free[i]];
  if (report) {
    report->residual = rel;
    report->iterations = iterations;
    report->multiplier = sys.mean_zero ? x[nf] : 0.0;
  }
  return SolutionField(sys.mesh, std::move(u));
}

// B(u, phi_i) - L(phi_i) for every vertex; the caller masks rows. Reuses the
// assembler so the residual matches the discrete operator exactly.
inline VecX weak_residual(const CoefficientSet& c, const SolutionField& u, const BCSet& bc,
                          const AssembleOptions& opts = {}) {
  DiscreteSystem sys = assemble(c, u.mesh_ptr(), bc, opts);
  VecX r = sys.K * u.nodal() - sys.F;
  // Constrained rows hold the (nonzero) discrete conormal flux, not an
  // equation the solution is supposed to satisfy.
  for (const auto& [vertex, value] : sys.dirichlet) r[vertex] = 0.0;
  return r;
}

struct EdgeFlux {
  int edge = 0;        // index into mesh.boundary
  Vec2 midpoint;
  double conormal = 0.0;  // (a grad u + b u) . n at the midpoint
};

inline std::vector<EdgeFlux> boundary_flux(const SolutionField& u, const CoefficientSet& c,
                                           BoundaryTag tag) {
  const Mesh& m = u.mesh();
  // adjacent triangle per boundary edge
  std::map<std::pair<int, int>, int> owner;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t)
    for (int k = 0; k < 3; ++k) {
      int a = m.triangles[t][k], b = m.triangles[t][(k + 1) % 3];
      owner[{std::min(a, b), std::max(a, b)}] = t;
    }
  std::vector<EdgeFlux> out;
  for (int e = 0; e < static_cast<int>(m.boundary.size()); ++e) {
    const auto& be = m.boundary[e];
    if (be.tag != tag) continue;
    auto it = owner.find({std::min(be.a, be.b), std::max(be.a, be.b)});
    if (it == owner.end()) throw Error("boundary_flux: dangling boundary edge");
    int t = it->second;
    Vec2 mid = 0.5 * (m.vertices[be.a] + m.vertices[be.b]);
    Vec2 n = m.edge_normal(be, t);
    Vec2 grad = u.tri_gradient(t);
    double uv = 0.5 * (u.nodal()[be.a] + u.nodal()[be.b]);
    EdgeFlux f;
    f.edge = e;
    f.midpoint = mid;
    f.conormal = (c.A(mid) * grad + c.b(mid) * uv).dot(n);
    out.push_back(f);
  }
  return out;
}

inline double l2_error(const SolutionField& u, const std::function<double(const Vec2&)>& exact,
                       int rule_pts = 7) {
  const Mesh& m = u.mesh();
  const auto& rule = femdetail::tri_rule(rule_pts);
  double sum = 0.0;
  for (const auto& tr : m.triangles) {
    Vec2 p0 = m.vertices[tr[0]], p1 = m.vertices[tr[1]], p2 = m.vertices[tr[2]];
    double area = 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                         (p2.x() - p0.x()) * (p1.y() - p0.y()));
    for (const auto& q : rule) {
      Vec2 x = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
      double uh = q.l0 * u.nodal()[tr[0]] + q.l1 * u.nodal()[tr[1]] + q.l2 * u.nodal()[tr[2]];
      double d = uh - exact(x);
      sum += q.w * area * d * d;
    }
  }
  return std::sqrt(sum);
}

}  // namespace ucplab
