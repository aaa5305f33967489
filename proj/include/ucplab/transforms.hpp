#pragma once

// Reductions that trade boundary/drift data for modified coefficients:
//
//  * Gauge: solve D_i(a_ij D_j Psi) = 0 with a grad Psi . n = eta~ (the
//    mean-zero extension of eta), then v = u e^{-Psi} satisfies a problem
//    with zero conormal data on the flat boundary inside the split ball and
//    coefficients  W^ = W + 2 a grad Psi,
//                  V^ = V + grad Psi . a grad Psi + (b + W) . grad Psi.
//    (The cross term carries the factor 2: substituting u = v e^Psi into the
//    weak form and absorbing the gauge equation leaves both the product-rule
//    term and the transposed one; the weak-residual tests pin this down.)
//
//  * Even reflection across the flat boundary, valid once the conormal data
//    vanishes and a_12 = 0 on that boundary.

#include "ucplab/assemble.hpp"
#include "ucplab/fields.hpp"
#include "ucplab/mesh.hpp"
#include "ucplab/solution.hpp"

#include <memory>

namespace ucplab {

struct GaugeResult {
  SolutionField psi;
  SolutionField v;
  CoefficientSet coefficients;  // problem satisfied by v; eta == 0
  BoundaryField eta_tilde;
  double compatibility = 0.0;   // |int eta~| after extension, should be ~0
  double psi_residual = 0.0;
};

inline SolutionField solve_gauge_potential(const CoefficientSet& c,
                                           std::shared_ptr<const Mesh> mesh,
                                           const BoundaryField& eta_tilde,
                                           SolveReport* report = nullptr) {
  CoefficientSet principal = CoefficientSet::laplace();
  principal.A = c.A;
  principal.ell = c.ell;
  BCSet bc;
  bc.neumann.push_back({BoundaryWhere::all, [eta_tilde](const Vec2& p) { return eta_tilde(p); }});
  AssembleOptions opts;
  opts.mean_zero = true;
  DiscreteSystem sys = assemble(principal, std::move(mesh), bc, opts);
  return solve_system(sys, report);
}

// Max conormal flux magnitude over flat edges with midpoint inside
// B_{window}; this is the quantity the gauge transform is meant to kill.
inline double conormal_residual(const SolutionField& u, const CoefficientSet& c,
                                double window = 0.9) {
  double worst = 0.0;
  for (const auto& f : boundary_flux(u, c, BoundaryTag::flat))
    if (f.midpoint.norm() <= window) worst = std::max(worst, std::abs(f.conormal));
  return worst;
}

inline GaugeResult gauge_transform(const SolutionField& u, const CoefficientSet& c,
                                   double split_radius = 1.0) {
  if (!c.has_eta) throw Error("gauge_transform: coefficient set has no eta");
  auto mesh = u.mesh_ptr();
  BoundaryField eta_tilde = extend_eta(c.eta, *mesh, split_radius);

  // compatibility: total boundary integral of eta~ via edge quadrature
  double total = 0.0, len_in = 0.0, len_out = 0.0;
  for (const auto& e : mesh->boundary)
    fielddetail::edge_split_integrate(mesh->vertices[e.a], mesh->vertices[e.b],
                                      split_radius, eta_tilde.inside, total, len_in, len_out);
  total += eta_tilde.outside_value * len_out;
  if (std::abs(total) > 1e-8 * (1.0 + len_in + len_out))
    throw Error("gauge_transform: eta extension failed the mean-zero check");

  SolveReport rep;
  SolutionField psi = solve_gauge_potential(c, mesh, eta_tilde, &rep);

  VecX v = u.nodal();
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u.nodal()[i] * std::exp(-psi.nodal()[i]);

  GaugeResult out{SolutionField(mesh, psi.nodal()), SolutionField(mesh, std::move(v)),
                  c, eta_tilde, std::abs(total), rep.residual};

  // Transformed coefficients: gradients of Psi come from the FE field.
  auto psi_ptr = std::make_shared<SolutionField>(out.psi);
  out.coefficients.W = [W = c.W, A = c.A, psi_ptr](const Vec2& p) {
    Vec2 g = psi_ptr->gradient(p);
    return Vec2(W(p) + 2.0 * (A(p) * g));
  };
  out.coefficients.V = [V = c.V, A = c.A, b = c.b, W = c.W, psi_ptr](const Vec2& p) {
    Vec2 g = psi_ptr->gradient(p);
    return V(p) + g.dot(A(p) * g) + (b(p) + W(p)).dot(g);
  };
  out.coefficients.eta = [](const Vec2&) { return 0.0; };
  out.coefficients.has_eta = false;
  return out;
}

struct ReflectedProblem {
  std::shared_ptr<const Mesh> full_mesh;
  SolutionField v_ext;
  CoefficientSet coefficients;
  std::vector<int> mirror_of;
};

// Even extension of v across y = 0 with reflected coefficients. Requires the
// off-diagonal a_12 to vanish on the flat boundary (checked at edge
// midpoints against `tol`); otherwise the extension is not a weak solution.
inline ReflectedProblem reflect_even_extension(const SolutionField& v, const CoefficientSet& c,
                                               double tol = 1e-8) {
  const Mesh& half = v.mesh();
  double worst = 0.0, scale = 0.0;
  for (const auto& e : half.boundary) {
    if (e.tag != BoundaryTag::flat) continue;
    Vec2 mid = 0.5 * (half.vertices[e.a] + half.vertices[e.b]);
    Mat2 a = c.A(mid);
    worst = std::max(worst, std::abs(a(0, 1)));
    scale = std::max(scale, a.cwiseAbs().maxCoeff());
  }
  if (worst > tol * std::max(1.0, scale))
    throw Error("reflect_even_extension: a_12 = " + std::to_string(worst) +
                " on the flat boundary; flatten/normalize first");
  if (c.has_eta)
    throw Error("reflect_even_extension: eta must be zero (gauge away first)");

  std::vector<int> mirror;
  Mesh full = mirror_mesh(half, &mirror);
  auto full_ptr = std::make_shared<const Mesh>(std::move(full));

  VecX ext(full_ptr->vertices.size());
  ext.setZero();
  for (std::size_t i = 0; i < half.vertices.size(); ++i) {
    ext[static_cast<Eigen::Index>(i)] = v.nodal()[static_cast<Eigen::Index>(i)];
    ext[mirror[i]] = v.nodal()[static_cast<Eigen::Index>(i)];
  }

  ReflectedProblem out{full_ptr, SolutionField(full_ptr, std::move(ext)),
                       reflect_coefficients(c), std::move(mirror)};
  return out;
}

// Max weak residual of the extension against interior hat functions of the
// full mesh; decays with h when the extension really is a weak solution.
inline double reflection_residual(const ReflectedProblem& rp, int tri_rule = 7) {
  BCSet bc;  // no boundary data: interior rows only are read
  AssembleOptions opts;
  opts.tri_rule = tri_rule;
  VecX r = weak_residual(rp.coefficients, rp.v_ext, bc, opts);
  std::vector<char> on_boundary(rp.full_mesh->vertices.size(), 0);
  for (const auto& e : rp.full_mesh->boundary) on_boundary[e.a] = on_boundary[e.b] = 1;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (!on_boundary[i]) worst = std::max(worst, std::abs(r[i]));
  return worst;
}

}  // namespace ucplab
