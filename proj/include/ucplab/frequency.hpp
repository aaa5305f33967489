#pragma once

// Doubling / frequency analysis on half-balls:
//   H(r) = avg_{B_r^+} |w|^2
//   N(r) = H(2r) / H(r)
//   F(r) = avg_{B_r^+} |grad w|^2 (r^2 - |x|^2)  /  H(r)
//   dyadic_log(r) = log2 sqrt(N(r))
// For a degree-m homogeneous Neumann-harmonic w: F == 2m and N == 4^m.
//
// Quadrature is polar composite Gauss, independent of any FEM mesh; fields
// are evaluated through their interpolants. For FEM-backed fields the panel
// layout adapts to the generating size law of the mesh.

#include "ucplab/core.hpp"
#include "ucplab/geometry.hpp"
#include "ucplab/solution.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <ostream>

namespace ucplab {

class FieldView {
 public:
  virtual ~FieldView() = default;
  // Value and gradient at p. `hint` threads point-location state.
  virtual void eval(const Vec2& p, double& val, Vec2& grad, int* hint) const = 0;
  // Largest rho such that B_rho^+ is covered by the field's domain.
  virtual double max_radius() const = 0;
};

class AnalyticView : public FieldView {
 public:
  AnalyticView(std::function<double(const Vec2&)> f, std::function<Vec2(const Vec2&)> grad,
               double max_r = 1e30)
      : f_(std::move(f)), grad_(std::move(grad)), max_r_(max_r) {}
  void eval(const Vec2& p, double& val, Vec2& grad, int*) const override {
    val = f_(p);
    grad = grad_(p);
  }
  double max_radius() const override { return max_r_; }

 private:
  std::function<double(const Vec2&)> f_;
  std::function<Vec2(const Vec2&)> grad_;
  double max_r_;
};

class FemView : public FieldView {
 public:
  explicit FemView(SolutionField u) : u_(std::move(u)) {
    // Inscribed radius of the polygonal rim: chords cut inside the circle,
    // so cap at the closest arc-edge midpoint.
    max_r_ = u_.mesh().radius;
    for (const auto& e : u_.mesh().boundary)
      if (e.tag == BoundaryTag::arc) {
        Vec2 mid = 0.5 * (u_.mesh().vertices[e.a] + u_.mesh().vertices[e.b]);
        max_r_ = std::min(max_r_, mid.norm());
      }
  }
  void eval(const Vec2& p, double& val, Vec2& grad, int* hint) const override {
    u_.value_and_gradient(p, val, grad, hint);
  }
  double max_radius() const override { return max_r_; }
  const SolutionField& field() const { return u_; }

 private:
  SolutionField u_;
  double max_r_;
};

// w(z) = f(M z); grad w = M^T grad f(M z).
class MappedView : public FieldView {
 public:
  MappedView(std::shared_ptr<const FieldView> f, const LinearChange& map)
      : f_(std::move(f)), M_(map.matrix()) {
    if (M_.rows() != 2) throw Error("MappedView: 2x2 map required");
    // crude but safe: |Mz| <= ||M|| |z|
    norm_ = M_.operatorNorm();
  }
  void eval(const Vec2& p, double& val, Vec2& grad, int* hint) const override {
    Vec2 q = M_ * p;
    Vec2 g;
    f_->eval(q, val, g, hint);
    grad = M_.transpose() * g;
  }
  double max_radius() const override { return f_->max_radius() / norm_; }

 private:
  std::shared_ptr<const FieldView> f_;
  Mat2 M_;
  double norm_;
};

// w(x) = s * f(y0 + lambda x); grad w = s lambda grad f.
class ZoomView : public FieldView {
 public:
  ZoomView(std::shared_ptr<const FieldView> f, const Vec2& y0, double lambda, double scale = 1.0)
      : f_(std::move(f)), y0_(y0), lambda_(lambda), scale_(scale) {
    if (!(lambda > 0.0)) throw Error("ZoomView: lambda must be positive");
  }
  void eval(const Vec2& p, double& val, Vec2& grad, int* hint) const override {
    f_->eval(y0_ + lambda_ * p, val, grad, hint);
    val *= scale_;
    grad *= scale_ * lambda_;
  }
  double max_radius() const override {
    return (f_->max_radius() - y0_.norm()) / lambda_;
  }

 private:
  std::shared_ptr<const FieldView> f_;
  Vec2 y0_;
  double lambda_, scale_;
};

struct QuadSpec {
  int radial_gauss = 16;
  int angular_gauss = 8;
  int radial_subs = 6;        // uniform subintervals when not adaptive
  int angular_panels = 12;
  bool adaptive = false;      // subdivide by the mesh size law below
  double law_h = 0.05, law_R = 1.0, law_g = 1.0;
  int max_radial_subs = 96;
  int max_angular_panels = 96;

  static QuadSpec analytic() { return QuadSpec{}; }

  static QuadSpec for_mesh(const Mesh& m) {
    QuadSpec q;
    q.adaptive = true;
    q.law_h = m.h;
    q.law_R = m.radius;
    q.law_g = m.grading;
    q.radial_gauss = 16;
    q.angular_gauss = 4;
    return q;
  }

  double size_at(double rho) const {
    double s = law_h * std::pow(std::max(rho, 0.0) / law_R, law_g - 1.0);
    return std::max(std::min(s, law_h), law_h * law_h);
  }
};

namespace freqdetail {

struct HalfBallIntegrals {
  double w2 = 0.0;        // int |w|^2
  double grad_pw = 0.0;   // int |grad w|^2 (r^2 - |x|^2)
  double radial = 0.0;    // int w (x . grad w)
};

inline std::vector<double> radial_breaks(double r, const QuadSpec& q) {
  std::vector<double> pts{0.0};
  if (!q.adaptive) {
    for (int i = 1; i <= q.radial_subs; ++i) pts.push_back(r * i / q.radial_subs);
    return pts;
  }
  double floor_step = r / q.max_radial_subs;
  double rho = 0.0;
  while (rho < r) {
    double step = std::max(q.size_at(rho), floor_step);
    rho = std::min(rho + step, r);
    pts.push_back(rho);
  }
  return pts;
}

inline HalfBallIntegrals integrate_half_ball(const FieldView& f, double r, const QuadSpec& q) {
  const GaussRule& gr = gauss_legendre(q.radial_gauss);
  const GaussRule& gt = gauss_legendre(q.angular_gauss);
  int panels = q.angular_panels;
  if (q.adaptive)
    panels = std::clamp(static_cast<int>(std::ceil(kPi * r / q.size_at(r))), 8,
                        q.max_angular_panels);
  std::vector<double> breaks = radial_breaks(r, q);

  HalfBallIntegrals acc;
  int hint = -1;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    double r0 = breaks[s], r1 = breaks[s + 1];
    for (int i = 0; i < q.radial_gauss; ++i) {
      double rho = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gr.nodes[i];
      double wr = 0.5 * (r1 - r0) * gr.weights[i] * rho;
      double weight_poly = r * r - rho * rho;
      for (int p = 0; p < panels; ++p) {
        double t0 = kPi * p / panels, t1 = kPi * (p + 1) / panels;
        for (int j = 0; j < q.angular_gauss; ++j) {
          double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gt.nodes[j];
          double w = wr * 0.5 * (t1 - t0) * gt.weights[j];
          Vec2 x(rho * std::cos(th), rho * std::sin(th));
          double val;
          Vec2 grad;
          f.eval(x, val, grad, &hint);
          acc.w2 += w * val * val;
          acc.grad_pw += w * grad.squaredNorm() * weight_poly;
          acc.radial += w * val * x.dot(grad);
        }
      }
    }
  }
  return acc;
}

}  // namespace freqdetail

struct RadialProfile {
  std::vector<double> radii;
  std::vector<double> H;
  std::vector<double> N;
  std::vector<double> F;
  std::vector<double> dyadic_log;
};

inline double half_ball_area(double r) { return 0.5 * kPi * r * r; }

// H at a single radius (average of w^2 over B_r^+).
inline double height_at(const FieldView& f, double r, const QuadSpec& q) {
  if (!(r > 0.0)) throw Error("height_at: radius must be positive");
  if (r > f.max_radius() * (1.0 + 1e-12))
    throw Error("height_at: radius " + std::to_string(r) + " outside valid range (max " +
                std::to_string(f.max_radius()) + ")");
  return freqdetail::integrate_half_ball(f, r, q).w2 / half_ball_area(r);
}

inline RadialProfile radial_profile(const FieldView& f, const std::vector<double>& radii,
                                    const QuadSpec& q = QuadSpec::analytic()) {
  RadialProfile out;
  out.radii = radii;
  std::size_t n = radii.size();
  out.H.resize(n);
  out.N.resize(n);
  out.F.resize(n);
  out.dyadic_log.resize(n);
  for (double r : radii) {
    if (!(r > 0.0)) throw Error("radial_profile: radii must be positive");
    if (2.0 * r > f.max_radius() * (1.0 + 1e-12))
      throw Error("radial_profile: radius " + std::to_string(r) +
                  " outside valid range (doubling needs 2r <= " +
                  std::to_string(f.max_radius()) + ")");
  }
  parallel_for(n, [&](std::size_t i) {
    double r = radii[i];
    auto base = freqdetail::integrate_half_ball(f, r, q);
    auto twice = freqdetail::integrate_half_ball(f, 2.0 * r, q);
    double H = base.w2 / half_ball_area(r);
    double H2 = twice.w2 / half_ball_area(2.0 * r);
    if (!(H > 1e-290))
      throw Error("radial_profile: H vanishes at radius " + std::to_string(r));
    out.H[i] = H;
    out.N[i] = H2 / H;
    out.F[i] = base.grad_pw / half_ball_area(r) / H;
    out.dyadic_log[i] = 0.5 * std::log2(out.N[i]);
  });
  return out;
}

inline void write_profile_csv(const RadialProfile& p, std::ostream& os) {
  os << "r,H,N,F,log2_sqrt_N\n";
  os.precision(17);
  for (std::size_t i = 0; i < p.radii.size(); ++i)
    os << p.radii[i] << "," << p.H[i] << "," << p.N[i] << "," << p.F[i] << ","
       << p.dyadic_log[i] << "\n";
}

// The three differentiation identities behind monotonicity, checked at one
// radius. All derivatives are central differences with step 1e-3 * r.
struct IdentityReport {
  double r = 0.0;
  double gap_derivative = 0.0;  // dH/dr vs 2/r avg w (x.grad w)
  double gap_dirichlet = 0.0;   // dH/dr vs 1/r avg |grad w|^2 (r^2-|x|^2)
  double gap_logslope = 0.0;    // d log H / d log r vs F(r)
  double gap_doubling = 0.0;    // |N - 2^(int F)| / N
};

inline IdentityReport verify_identities(const FieldView& f, double r,
                                        const QuadSpec& q = QuadSpec::analytic()) {
  if (2.0 * r > f.max_radius())
    throw Error("verify_identities: radius " + std::to_string(r) + " outside valid range");
  IdentityReport rep;
  rep.r = r;
  double dr = 1e-3 * r;
  double Hp = height_at(f, r + dr, q), Hm = height_at(f, r - dr, q);
  double dHdr = (Hp - Hm) / (2.0 * dr);

  auto base = freqdetail::integrate_half_ball(f, r, q);
  double H = base.w2 / half_ball_area(r);
  double avg_radial = base.radial / half_ball_area(r);
  double avg_grad = base.grad_pw / half_ball_area(r);
  double F = avg_grad / H;

  rep.gap_derivative = std::abs(dHdr - 2.0 / r * avg_radial);
  rep.gap_dirichlet = std::abs(dHdr - avg_grad / r);
  rep.gap_logslope = std::abs((std::log(Hp) - std::log(Hm)) /
                                  (std::log(r + dr) - std::log(r - dr)) - F);

  // N(r) against exp2 of the dyadic integral of F
  const GaussRule& g = gauss_legendre(24);
  double s0 = std::log2(r);
  double integral = 0.0;
  for (int i = 0; i < 24; ++i) {
    double s = s0 + 0.5 * (g.nodes[i] + 1.0);
    double rs = std::exp2(s);
    auto bb = freqdetail::integrate_half_ball(f, rs, q);
    double Hs = bb.w2 / half_ball_area(rs);
    integral += 0.5 * g.weights[i] * (bb.grad_pw / half_ball_area(rs) / Hs);
  }
  double N = height_at(f, 2.0 * r, q) / H;
  rep.gap_doubling = std::abs(N - std::exp2(integral)) / N;
  return rep;
}

enum class OrderClass { finite, infinite_suspicion };

struct VanishingOrderEstimate {
  double m_hat = 0.0;
  int m_rounded = 0;
  double deviation = 0.0;
  OrderClass cls = OrderClass::finite;
};

// Median of dyadic_log over the smallest-quartile radii. Requires a grid
// that actually probes the small-scale regime.
inline VanishingOrderEstimate vanishing_order(const RadialProfile& p, double cutoff = 12.0) {
  if (p.radii.size() < 8)
    throw Error("vanishing_order: need at least 8 radii");
  std::vector<std::size_t> idx(p.radii.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return p.radii[a] < p.radii[b]; });
  if (p.radii[idx.back()] < 20.0 * p.radii[idx.front()])
    throw Error("vanishing_order: radii span less than a factor 20");
  std::size_t quart = std::max<std::size_t>(idx.size() / 4, 2);
  std::vector<double> small;
  for (std::size_t k = 0; k < quart; ++k) small.push_back(p.dyadic_log[idx[k]]);
  std::sort(small.begin(), small.end());
  double med = small.size() % 2 ? small[small.size() / 2]
                                : 0.5 * (small[small.size() / 2 - 1] + small[small.size() / 2]);
  VanishingOrderEstimate est;
  est.m_hat = med;
  est.m_rounded = static_cast<int>(std::lround(med));
  est.deviation = std::abs(med - est.m_rounded);
  est.cls = med > cutoff ? OrderClass::infinite_suspicion : OrderClass::finite;
  return est;
}

struct RigidityReport {
  int m = 0;
  double max_dev_F = 0.0;
  double max_dev_N = 0.0;
  bool rigid = false;
};

// For exact homogeneous Neumann-harmonics the profile is flat: F == 2m,
// N == 4^m at every radius.
inline RigidityReport rigidity_check(const RadialProfile& p, double tol_F = 1e-6,
                                     double tol_N = 1e-5) {
  if (p.F.empty()) throw Error("rigidity_check: empty profile");
  std::vector<double> fs = p.F;
  std::sort(fs.begin(), fs.end());
  double medF = fs[fs.size() / 2];
  RigidityReport rep;
  rep.m = std::max(0, static_cast<int>(std::lround(0.5 * medF)));
  double fourm = std::pow(4.0, rep.m);
  for (std::size_t i = 0; i < p.F.size(); ++i) {
    rep.max_dev_F = std::max(rep.max_dev_F, std::abs(p.F[i] - 2.0 * rep.m));
    rep.max_dev_N = std::max(rep.max_dev_N, std::abs(p.N[i] - fourm));
  }
  rep.rigid = rep.max_dev_F < tol_F && rep.max_dev_N < tol_N;
  return rep;
}

}  // namespace ucplab
