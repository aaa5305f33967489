#pragma once

// Coefficient data for the divergence-form operator
//   D_i(a_ij D_j u + b_i u) + W_i D_i u + V u = 0,   (a grad u + b u) . n = eta u
// and the transforms that act on it: even/odd reflection across the flat
// boundary, pushforward under a change of variables, the mean-zero boundary
// extension of eta, and the matrix oscillation modulus.

#include "ucplab/core.hpp"
#include "ucplab/geometry.hpp"
#include "ucplab/mesh.hpp"

#include <functional>
#include <utility>

namespace ucplab {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Mat2(const Vec2&)>;

struct Ellipticity {
  double lo = 1.0, hi = 1.0;
};

// Integrability exponents for V (L^q), b, W (L^p) and eta (L^s on the
// boundary); admissibility means p > d, q > d/2, s > d-1.
struct Integrability {
  double p = 3.0, q = 2.0, s = 2.0;

  void validate(int d) const {
    if (!(p > d))
      throw Error("integrability: p = " + std::to_string(p) + " violates p > d");
    if (!(q > d / 2.0))
      throw Error("integrability: q = " + std::to_string(q) + " violates q > d/2");
    if (!(s > d - 1.0))
      throw Error("integrability: s = " + std::to_string(s) + " violates s > d-1");
  }
};

struct CoefficientSet {
  MatrixField A;
  VectorField b;
  VectorField W;
  ScalarField V;
  ScalarField eta;   // Robin weight on the flat boundary; ignored if !has_eta
  bool has_eta = false;
  Ellipticity ell;
  Integrability integ;

  static CoefficientSet laplace() {
    CoefficientSet c;
    c.A = [](const Vec2&) { return Mat2::Identity(); };
    c.b = [](const Vec2&) { return Vec2::Zero(); };
    c.W = [](const Vec2&) { return Vec2::Zero(); };
    c.V = [](const Vec2&) { return 0.0; };
    c.eta = [](const Vec2&) { return 0.0; };
    return c;
  }

  // Symmetry + ellipticity spot check; used by assembly in checked mode.
  void check_at(const Vec2& p) const {
    Mat2 a = A(p);
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (std::abs(a(0, 1) - a(1, 0)) > 1e-10 * scale)
      throw Error("coefficients: a(x) not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat2> es(a);
    double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (lo < ell.lo * (1.0 - 1e-8) - 1e-14 || hi > ell.hi * (1.0 + 1e-8) + 1e-14)
      throw Error("coefficients: ellipticity bounds violated at sample point");
  }
};

// eta restricted to the boundary inside B_split, extended by the unique
// constant that makes the total boundary integral vanish.
struct BoundaryField {
  ScalarField inside;
  double outside_value = 0.0;
  double split_radius = 1.0;

  double operator()(const Vec2& p) const {
    return p.norm() < split_radius ? inside(p) : outside_value;
  }
};

namespace fielddetail {

// Splits [0,1] at the points where |a + t(b-a)| = split and integrates f over
// the edge with 4-point Gauss on each sub-segment, accumulating the inside
// part into (int_in, len_in) and the outside length into len_out.
inline void edge_split_integrate(const Vec2& a, const Vec2& b, double split,
                                 const ScalarField& f, double& int_in, double& len_in,
                                 double& len_out) {
  Vec2 d = b - a;
  double len = d.norm();
  double qa = d.squaredNorm();
  double qb = 2.0 * a.dot(d);
  double qc = a.squaredNorm() - split * split;
  std::vector<double> cuts{0.0, 1.0};
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc > 0.0 && qa > 0.0) {
    double sq = std::sqrt(disc);
    for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
      if (t > 1e-14 && t < 1.0 - 1e-14) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& g = gauss_legendre(4);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double t0 = cuts[k], t1 = cuts[k + 1];
    double tm = 0.5 * (t0 + t1);
    Vec2 mid = a + tm * d;
    double seg = (t1 - t0) * len;
    if (mid.norm() < split) {
      len_in += seg;
      for (int q = 0; q < 4; ++q) {
        double t = tm + 0.5 * (t1 - t0) * g.nodes[q];
        int_in += f(a + t * d) * 0.5 * seg * g.weights[q];
      }
    } else {
      len_out += seg;
    }
  }
}

}  // namespace fielddetail

inline BoundaryField extend_eta(const ScalarField& eta, const Mesh& mesh,
                                double split_radius = 1.0) {
  double int_in = 0.0, len_in = 0.0, len_out = 0.0;
  for (const auto& e : mesh.boundary)
    fielddetail::edge_split_integrate(mesh.vertices[e.a], mesh.vertices[e.b], split_radius,
                                      eta, int_in, len_in, len_out);
  if (len_in <= 1e-12)
    throw Error("extend_eta: no boundary inside the split ball");
  if (len_out <= 1e-12)
    throw Error("extend_eta: no boundary outside the split ball; "
                "mean-zero extension impossible");
  BoundaryField out;
  out.inside = eta;
  out.split_radius = split_radius;
  out.outside_value = -int_in / len_out;
  return out;
}

// Even reflection of the solution forces these parities on the coefficients:
// with S = diag(1,-1), a(x~) = S a(x) S, b/W pick up S, V is even, and the
// Robin weight is consumed by the reflection (the extension has zero
// conormal flux across y = 0).
inline CoefficientSet reflect_coefficients(const CoefficientSet& c) {
  CoefficientSet out = c;
  Mat2 S = Mat2::Identity();
  S(1, 1) = -1.0;
  auto up = [](const Vec2& p) { return Vec2(p.x(), std::abs(p.y())); };
  out.A = [A = c.A, S, up](const Vec2& p) {
    Mat2 a = A(up(p));
    return p.y() >= 0.0 ? a : Mat2(S * a * S);
  };
  out.b = [b = c.b, S, up](const Vec2& p) {
    Vec2 v = b(up(p));
    return p.y() >= 0.0 ? v : Vec2(S * v);
  };
  out.W = [W = c.W, S, up](const Vec2& p) {
    Vec2 v = W(up(p));
    return p.y() >= 0.0 ? v : Vec2(S * v);
  };
  out.V = [V = c.V, up](const Vec2& p) { return V(up(p)); };
  out.eta = [](const Vec2&) { return 0.0; };
  out.has_eta = false;
  return out;
}

// Pushforward of the coefficient set under y = M(x), preserving the weak
// form: with J the Jacobian at x and j = |det J|,
//   A~ = J A J^T / j,  b~ = J b / j,  W~ = J W / j,  V~ = V / j,
// and eta scales by the inverse tangential stretch so the boundary integral
// is preserved. `tangent` gives the unit boundary tangent at a source point.
template <typename Map>
inline CoefficientSet pushforward_coefficients(
    const CoefficientSet& c, const Map& map,
    VectorField tangent = [](const Vec2&) { return Vec2(1.0, 0.0); }) {
  CoefficientSet out = c;
  auto pre = [map](const Vec2& y) { return map.apply_inverse(y); };
  auto jac = [map](const Vec2& x) -> Mat2 {
    if constexpr (requires { map.jacobian(x); }) return map.jacobian(x);
    else return map.matrix();
  };
  out.A = [A = c.A, pre, jac](const Vec2& y) {
    Vec2 x = pre(y);
    Mat2 J = jac(x);
    return Mat2((J * A(x) * J.transpose()) / std::abs(J.determinant()));
  };
  out.b = [b = c.b, pre, jac](const Vec2& y) {
    Vec2 x = pre(y);
    Mat2 J = jac(x);
    return Vec2((J * b(x)) / std::abs(J.determinant()));
  };
  out.W = [W = c.W, pre, jac](const Vec2& y) {
    Vec2 x = pre(y);
    Mat2 J = jac(x);
    return Vec2((J * W(x)) / std::abs(J.determinant()));
  };
  out.V = [V = c.V, pre, jac](const Vec2& y) {
    Vec2 x = pre(y);
    return V(x) / std::abs(jac(x).determinant());
  };
  if (c.has_eta) {
    out.eta = [eta = c.eta, pre, jac, tangent](const Vec2& y) {
      Vec2 x = pre(y);
      double stretch = (jac(x) * tangent(x)).norm();
      return eta(x) / stretch;
    };
  }
  // Ellipticity bounds transform with the singular values of J; estimate at
  // the origin, which is where the normalized problem is read off.
  Vec2 x0 = pre(Vec2::Zero());
  Mat2 J0 = jac(x0);
  Eigen::JacobiSVD<Mat2> svd(J0);
  double s1 = svd.singularValues()(0), s2 = svd.singularValues()(1);
  double j0 = std::abs(J0.determinant());
  out.ell.lo = c.ell.lo * (s2 * s2) / j0;
  out.ell.hi = c.ell.hi * (s1 * s1) / j0;
  return out;
}

// Mean-square oscillation of A around A0 over B_r intersected with the
// domain (characteristic function `inside`).
struct OscillationModulus {
  std::vector<double> radii;
  std::vector<double> values;
};

inline OscillationModulus oscillation_modulus(
    const MatrixField& A, const Mat2& A0, const std::vector<double>& radii,
    const std::function<bool(const Vec2&)>& inside = [](const Vec2& p) { return p.y() > 0.0; }) {
  OscillationModulus out;
  out.radii = radii;
  const GaussRule& gr = gauss_legendre(16);
  const GaussRule& gt = gauss_legendre(32);
  for (double r : radii) {
    if (!(r > 0.0)) throw Error("oscillation_modulus: radii must be positive");
    double sum = 0.0, area = 0.0;
    for (int i = 0; i < 16; ++i) {
      double rho = 0.5 * r * (gr.nodes[i] + 1.0);
      double wr = 0.5 * r * gr.weights[i] * rho;
      for (int j = 0; j < 32; ++j) {
        double th = kPi * (gt.nodes[j] + 1.0);  // (0, 2pi)
        double w = wr * kPi * gt.weights[j];
        Vec2 p(rho * std::cos(th), rho * std::sin(th));
        if (!inside(p)) continue;
        area += w;
        sum += w * (A(p) - A0).squaredNorm();
      }
    }
    if (area <= 0.0) throw Error("oscillation_modulus: empty intersection");
    out.values.push_back(sum / area);
  }
  return out;
}

}  // namespace ucplab
