#pragma once

// Small-scale structure at a boundary point:
//  * bases of homogeneous A0-harmonic polynomials with vanishing conormal
//    derivative on the flat boundary (P = Q o Psi with Q Laplace-Neumann),
//  * normalized blowups u_lambda(x) = u(lambda x) / ||u||_{Psi(B_lambda^+)},
//  * least-squares fits against the homogeneous basis on a fixed polar grid,
//  * boundary zero sets: root lists with plateau flags in d = 2, dyadic
//    cell covers with a box-counting slope in d = 3.

#include "ucplab/core.hpp"
#include "ucplab/frequency.hpp"
#include "ucplab/geometry.hpp"

#include <array>
#include <limits>
#include <ostream>

namespace ucplab {

struct Monomial {
  int ex = 0, ey = 0, ez = 0;
  double c = 0.0;
};

// Homogeneous polynomial x -> Q(Psi x) in monomial form.
class HomogPoly {
 public:
  HomogPoly(int degree, MatX psi, std::vector<Monomial> q)
      : degree_(degree), psi_(std::move(psi)), q_(std::move(q)) {}

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(psi_.rows()); }
  const std::vector<Monomial>& monomials() const { return q_; }
  const MatX& psi() const { return psi_; }

  double eval(const VecX& x) const {
    VecX y = psi_ * x;
    double y0 = y[0], y1 = y.size() > 1 ? y[1] : 0.0, y2 = y.size() > 2 ? y[2] : 0.0;
    double s = 0.0;
    for (const auto& mo : q_)
      s += mo.c * ipow(y0, mo.ex) * ipow(y1, mo.ey) * ipow(y2, mo.ez);
    return s;
  }
  double operator()(const Vec2& p) const {
    VecX x(2);
    x << p.x(), p.y();
    return eval(x);
  }
  double operator()(const Vec3& p) const {
    VecX x(3);
    x << p.x(), p.y(), p.z();
    return eval(x);
  }

  VecX grad(const VecX& x) const {
    VecX y = psi_ * x;
    double yv[3] = {y[0], y.size() > 1 ? y[1] : 0.0, y.size() > 2 ? y[2] : 0.0};
    VecX gq = VecX::Zero(dim());
    for (const auto& mo : q_) {
      int e[3] = {mo.ex, mo.ey, mo.ez};
      for (int k = 0; k < dim(); ++k) {
        if (e[k] == 0) continue;
        double t = mo.c * e[k];
        for (int j = 0; j < 3; ++j) t *= ipow(yv[j], j == k ? e[j] - 1 : e[j]);
        gq[k] += t;
      }
    }
    return psi_.transpose() * gq;
  }
  Vec2 grad2(const Vec2& p) const {
    VecX x(2);
    x << p.x(), p.y();
    VecX g = grad(x);
    return Vec2(g[0], g[1]);
  }

 private:
  int degree_;
  MatX psi_;
  std::vector<Monomial> q_;

  static double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  }
};

namespace polydetail {

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Laplace-Neumann basis in model coordinates: d = 2 gives Re((y1+i y2)^m)
// (one function per degree); d = 3 gives the even-in-y3 harmonic
// homogeneous polynomials (kernel of the Laplacian on the monomial space).
inline std::vector<std::vector<Monomial>> model_basis(int d, int m) {
  if (m < 0) throw Error("neumann_harmonic_basis: degree must be nonnegative");
  if (d == 2) {
    std::vector<Monomial> q;
    for (int k = 0; 2 * k <= m; ++k)
      q.push_back({m - 2 * k, 2 * k, 0, (k % 2 ? -1.0 : 1.0) * binom(m, 2 * k)});
    return {q};
  }
  if (d != 3) throw Error("neumann_harmonic_basis: dim must be 2 or 3");

  auto monos = [](int deg) {
    std::vector<std::array<int, 3>> out;
    for (int i = deg; i >= 0; --i)
      for (int j = deg - i; j >= 0; --j) {
        int l = deg - i - j;
        if (l % 2 == 0) out.push_back({i, j, l});
      }
    return out;
  };
  auto cols = monos(m);
  if (m < 2) {
    std::vector<std::vector<Monomial>> basis;
    for (const auto& e : cols) basis.push_back({Monomial{e[0], e[1], e[2], 1.0}});
    return basis;
  }
  auto rows = monos(m - 2);
  auto row_index = [&](int i, int j, int l) -> int {
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r][0] == i && rows[r][1] == j && rows[r][2] == l) return static_cast<int>(r);
    return -1;
  };
  MatX L = MatX::Zero(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    auto [i, j, l] = cols[c];
    if (i >= 2) L(row_index(i - 2, j, l), c) += i * (i - 1.0);
    if (j >= 2) L(row_index(i, j - 2, l), c) += j * (j - 1.0);
    if (l >= 2) L(row_index(i, j, l - 2), c) += l * (l - 1.0);
  }
  Eigen::FullPivLU<MatX> lu(L);
  MatX ker = lu.kernel();
  std::vector<std::vector<Monomial>> basis;
  for (Eigen::Index k = 0; k < ker.cols(); ++k) {
    VecX v = ker.col(k);
    v /= v.norm();
    // canonical sign: first nonzero coefficient positive
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0) v = -v;
        break;
      }
    std::vector<Monomial> q;
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (std::abs(v[c]) > 1e-14)
        q.push_back({cols[c][0], cols[c][1], cols[c][2], v[static_cast<Eigen::Index>(c)]});
    basis.push_back(std::move(q));
  }
  return basis;
}

}  // namespace polydetail

// Degree-m homogeneous polynomials P with  tr(A0 D^2 P) = 0 and vanishing
// conormal (A0 grad P) . e_d on {x_d = 0}: P = Q o Psi_{A0}.
inline std::vector<HomogPoly> neumann_harmonic_basis(const MatX& A0, int m) {
  LinearChange psi = normalizing_map(A0);
  int d = psi.dim();
  std::vector<HomogPoly> out;
  for (auto& q : polydetail::model_basis(d, m))
    out.emplace_back(m, psi.matrix(), std::move(q));
  return out;
}

// Fixed polar evaluation grid on B_1^+ (Gauss nodes in rho and theta);
// weights include the polar factor and sum to |B_1^+| = pi/2.
struct RefGrid {
  int nr = 64, nt = 64;
  std::vector<Vec2> nodes;
  std::vector<double> weights;

  static const RefGrid& standard() {
    static const RefGrid g = make(64, 64);
    return g;
  }
  static RefGrid make(int nr, int nt) {
    RefGrid g;
    g.nr = nr;
    g.nt = nt;
    const GaussRule& grr = gauss_legendre(nr);
    const GaussRule& gtt = gauss_legendre(nt);
    for (int i = 0; i < nr; ++i) {
      double rho = 0.5 * (grr.nodes[i] + 1.0);
      double wr = 0.5 * grr.weights[i] * rho;
      for (int j = 0; j < nt; ++j) {
        double th = 0.5 * kPi * (gtt.nodes[j] + 1.0);
        g.nodes.push_back(Vec2(rho * std::cos(th), rho * std::sin(th)));
        g.weights.push_back(wr * 0.5 * kPi * gtt.weights[j]);
      }
    }
    return g;
  }
};

struct BlowupSequence {
  std::vector<double> lambdas;
  std::vector<double> normalizers;  // ||u||_{L2-avg} over the normalizing region
  MatX snapshots;                   // one row per lambda, columns = grid nodes
  Mat2 psi = Mat2::Identity();      // normalizing-region map
};

// u_lambda(x) = u(lambda x) / (avg_{Psi(B_lambda^+)} |u|^2)^(1/2). The
// mapped average equals avg_{B_lambda^+} |u(Psi z)|^2 (the Jacobians of the
// average cancel), which is evaluated on the same reference grid.
inline BlowupSequence rescale_blowup(const FieldView& u, const std::vector<double>& lambdas,
                                     const Mat2& psi = Mat2::Identity()) {
  if (lambdas.empty()) throw Error("rescale_blowup: no scales given");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i + 1]))
      throw Error("rescale_blowup: scales must decrease strictly");
  double reach = std::max(1.0, psi.operatorNorm());
  if (lambdas.front() * reach > u.max_radius() * (1.0 + 1e-12))
    throw Error("rescale_blowup: scale " + std::to_string(lambdas.front()) +
                " exceeds the field's valid radius");

  const RefGrid& grid = RefGrid::standard();
  BlowupSequence seq;
  seq.lambdas = lambdas;
  seq.psi = psi;
  seq.normalizers.resize(lambdas.size());
  seq.snapshots.resize(lambdas.size(), grid.nodes.size());

  double area = half_ball_area(1.0);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    double lam = lambdas[k];
    int hint = -1;
    double norm2 = 0.0;
    for (std::size_t g = 0; g < grid.nodes.size(); ++g) {
      double val;
      Vec2 gr;
      u.eval(lam * (psi * grid.nodes[g]), val, gr, &hint);
      norm2 += grid.weights[g] * val * val;
    }
    norm2 /= area;
    if (!(norm2 > 1e-290))
      throw Error("rescale_blowup: field vanishes on the normalizing region at scale " +
                  std::to_string(lam));
    double n = std::sqrt(norm2);
    seq.normalizers[k] = n;
    for (std::size_t g = 0; g < grid.nodes.size(); ++g) {
      double val;
      Vec2 gr;
      u.eval(lam * grid.nodes[g], val, gr, &hint);
      seq.snapshots(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(g)) = val / n;
    }
  }
  return seq;
}

struct HomogeneousFit {
  int degree = 0;
  VecX coefficients;                  // against neumann_harmonic_basis(A0, degree)
  std::vector<double> residuals;      // relative L2 residual per scale
  double residual = 0.0;              // residual at the final scale
  bool auto_degree = false;
};

inline HomogeneousFit fit_homogeneous(const BlowupSequence& seq, const MatX& A0, int degree = -1) {
  const RefGrid& grid = RefGrid::standard();

  auto fit_once = [&](const std::vector<HomogPoly>& basis, Eigen::Index row, VecX* coeffs) {
    const Eigen::Index k = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index g = static_cast<Eigen::Index>(grid.nodes.size());
    MatX B(g, k);
    for (Eigen::Index c = 0; c < k; ++c)
      for (Eigen::Index i = 0; i < g; ++i) B(i, c) = basis[c](grid.nodes[i]);
    VecX w = Eigen::Map<const VecX>(grid.weights.data(), g);
    MatX BtW = B.transpose() * w.asDiagonal();
    VecX s = seq.snapshots.row(row);
    VecX c = (BtW * B).ldlt().solve(BtW * s);
    VecX r = s - B * c;
    double num = r.cwiseProduct(r).dot(w);
    double den = s.cwiseProduct(s).dot(w);
    if (coeffs) *coeffs = c;
    return std::sqrt(num / std::max(den, 1e-300));
  };

  HomogeneousFit fit;
  Eigen::Index last = static_cast<Eigen::Index>(seq.lambdas.size()) - 1;
  if (degree < 0) {
    fit.auto_degree = true;
    double best = std::numeric_limits<double>::max();
    for (int m = 0; m <= 8; ++m) {
      double res = fit_once(neumann_harmonic_basis(A0, m), last, nullptr);
      if (res < best - 1e-12) {
        best = res;
        degree = m;
      }
    }
  }
  fit.degree = degree;
  auto basis = neumann_harmonic_basis(A0, degree);
  for (Eigen::Index row = 0; row <= last; ++row) {
    VecX c;
    double res = fit_once(basis, row, row == last ? &c : nullptr);
    fit.residuals.push_back(res);
    if (row == last) {
      fit.residual = res;
      fit.coefficients = c;
    }
  }
  return fit;
}

// ---------------------------------------------------------------------------
// boundary zero sets

struct PlateauInterval {
  double lo = 0.0, hi = 0.0;
};

struct BoundaryZeroSet {
  int ambient_dim = 2;
  double lo = -0.9, hi = 0.9;             // probed window (d = 2) or [-a,a]^2 (d = 3)
  std::vector<double> roots;              // d = 2
  std::vector<PlateauInterval> plateaus;  // d = 2: |trace| below the plateau floor
  std::vector<std::array<double, 2>> cells;  // d = 3: covered cell centers, finest scale
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  double dim_estimate = -std::numeric_limits<double>::infinity();
};

namespace zerodetail {

// Least-squares slope of log(count) vs log(1/scale) over the finest half of
// the scales with a nonzero count. Empty set: -inf.
inline double box_dimension(const std::vector<double>& scales,
                            const std::vector<std::size_t>& counts) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scales.size(); ++i)
    if (counts[i] > 0) {
      xs.push_back(std::log(1.0 / scales[i]));
      ys.push_back(std::log(static_cast<double>(counts[i])));
    }
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  if (xs.size() == 1) return 0.0;
  std::size_t start = xs.size() / 2;
  if (xs.size() - start < 2) start = xs.size() - 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = start; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    ++n;
  }
  double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-14) return 0.0;
  return (n * sxy - sx * sy) / det;
}

}  // namespace zerodetail

// Zero set of a boundary trace on [lo, hi], sampled at `resolution`. Sign
// changes are refined by bisection to 1e-12; runs of near-zero samples of
// length >= max(8, n/50) are flagged as plateaus instead of roots. The
// plateau floor is 1e-8 * sup |trace|.
inline BoundaryZeroSet boundary_zero_set(const std::function<double(double)>& trace,
                                         double lo, double hi, double resolution) {
  if (!(hi > lo)) throw Error("boundary_zero_set: empty window");
  if (!(resolution > 0.0) || resolution > (hi - lo) / 8.0)
    throw Error("boundary_zero_set: resolution too coarse for the window");

  BoundaryZeroSet zs;
  zs.ambient_dim = 2;
  zs.lo = lo;
  zs.hi = hi;

  const int n = static_cast<int>(std::ceil((hi - lo) / resolution));
  std::vector<double> ts(n + 1), vs(n + 1);
  double sup = 0.0;
  for (int k = 0; k <= n; ++k) {
    ts[k] = lo + (hi - lo) * k / n;
    vs[k] = trace(ts[k]);
    sup = std::max(sup, std::abs(vs[k]));
  }
  if (sup == 0.0) {
    zs.plateaus.push_back({lo, hi});
    zs.scales = {hi - lo};
    zs.counts = {1};
    zs.dim_estimate = 1.0;
    return zs;
  }
  const double floor = 1e-8 * sup;
  const int min_run = std::max(8, n / 50);

  std::vector<char> in_plateau(n + 1, 0);
  for (int k = 0; k <= n;) {
    if (std::abs(vs[k]) >= floor) {
      ++k;
      continue;
    }
    int j = k;
    while (j <= n && std::abs(vs[j]) < floor) ++j;
    if (j - k >= min_run) {
      zs.plateaus.push_back({ts[k], ts[j - 1]});
      for (int i = k; i < j; ++i) in_plateau[i] = 1;
    }
    k = j;
  }

  for (int k = 0; k < n; ++k) {
    if (in_plateau[k] || in_plateau[k + 1]) continue;
    double a = ts[k], b = ts[k + 1], fa = vs[k], fb = vs[k + 1];
    if (fa == 0.0) {
      zs.roots.push_back(a);
      continue;
    }
    if (k == n - 1 && fb == 0.0) zs.roots.push_back(b);
    if (fa * fb >= 0.0) continue;
    for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
      double m = 0.5 * (a + b);
      double fm = trace(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if (fa * fm < 0.0) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
    }
    zs.roots.push_back(0.5 * (a + b));
  }
  std::sort(zs.roots.begin(), zs.roots.end());
  zs.roots.erase(std::unique(zs.roots.begin(), zs.roots.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                 zs.roots.end());

  // dyadic interval counts over the window
  int max_level = 2;
  while ((hi - lo) / std::exp2(max_level + 1) > 2.0 * resolution && max_level < 20) ++max_level;
  max_level = std::max(max_level, 5);
  for (int j = 2; j <= max_level; ++j) {
    double scale = (hi - lo) / std::exp2(j);
    std::vector<char> hit(1u << j, 0);
    auto mark = [&](double t) {
      int c = std::clamp(static_cast<int>((t - lo) / scale), 0, (1 << j) - 1);
      hit[c] = 1;
    };
    for (double rt : zs.roots) mark(rt);
    for (const auto& pl : zs.plateaus) {
      int c0 = std::clamp(static_cast<int>((pl.lo - lo) / scale), 0, (1 << j) - 1);
      int c1 = std::clamp(static_cast<int>((pl.hi - lo) / scale), 0, (1 << j) - 1);
      for (int c = c0; c <= c1; ++c) hit[c] = 1;
    }
    zs.scales.push_back(scale);
    zs.counts.push_back(static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1)));
  }
  zs.dim_estimate = zerodetail::box_dimension(zs.scales, zs.counts);
  return zs;
}

// Zero set of a plane trace f(x1, x2) on [-a, a]^2 by dyadic cell cover. A
// cell at scale s is covered when min |f| over its center and midpoints is
// below s times a finite-difference gradient bound. Intended for analytic
// traces (d = 3 analysis runs).
inline BoundaryZeroSet boundary_zero_set_plane(
    const std::function<double(double, double)>& f, double half_width, int levels = 7) {
  if (!(half_width > 0.0)) throw Error("boundary_zero_set_plane: empty window");
  if (levels < 4) throw Error("boundary_zero_set_plane: need at least 4 scales");

  BoundaryZeroSet zs;
  zs.ambient_dim = 3;
  zs.lo = -half_width;
  zs.hi = half_width;

  double supf = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      supf = std::max(supf, std::abs(f(-half_width + (2.0 * half_width) * (i + 0.5) / 16,
                                       -half_width + (2.0 * half_width) * (j + 0.5) / 16)));
  double tiny = 1e-12 * std::max(supf, 1e-30);

  for (int j = 1; j <= levels; ++j) {
    int nside = 1 << j;
    double s = 2.0 * half_width / nside;
    std::size_t count = 0;
    bool finest = (j == levels);
    for (int cy = 0; cy < nside; ++cy) {
      for (int cx = 0; cx < nside; ++cx) {
        double x0 = -half_width + (cx + 0.5) * s;
        double y0 = -half_width + (cy + 0.5) * s;
        double gx = (f(x0 + 0.5 * s, y0) - f(x0 - 0.5 * s, y0)) / s;
        double gy = (f(x0, y0 + 0.5 * s) - f(x0, y0 - 0.5 * s)) / s;
        double bound = std::hypot(gx, gy);
        double fmin = std::abs(f(x0, y0));
        for (auto [dx, dy] : {std::pair{0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}})
          fmin = std::min(fmin, std::abs(f(x0 + dx * s, y0 + dy * s)));
        if (fmin <= 0.75 * s * bound + tiny) {
          ++count;
          if (finest) zs.cells.push_back({x0, y0});
        }
      }
    }
    zs.scales.push_back(s);
    zs.counts.push_back(count);
  }
  zs.dim_estimate = zerodetail::box_dimension(zs.scales, zs.counts);
  return zs;
}

struct TangentSet {
  BoundaryZeroSet zero_set;   // of the final blown-up snapshot
  bool converged = false;     // root lists stabilized across scales
  bool homogeneous = false;   // zero set invariant under dilation
  std::vector<double> lambdas;
};

// Tangent zero set of u at the boundary point (y0, 0): zero sets of the
// normalized zooms w_k(t) = u(y0 + lambda_k t, ...) on the boundary window.
inline TangentSet tangent_set(std::shared_ptr<const FieldView> u, double y0,
                              const std::vector<double>& lambdas, double window = 0.9,
                              double resolution = 1e-3) {
  if (lambdas.size() < 2) throw Error("tangent_set: need at least two scales");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i + 1])) throw Error("tangent_set: scales must decrease");
  if (std::abs(y0) + lambdas.front() * 2.0 > u->max_radius())
    throw Error("tangent_set: zoom window exceeds the field's valid radius");

  TangentSet out;
  out.lambdas = lambdas;
  std::vector<std::vector<double>> all_roots;
  BoundaryZeroSet final_zs;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    ZoomView zoom(u, Vec2(y0, 0.0), lambdas[k]);
    // normalize by the half-ball average so traces are comparable
    const RefGrid& grid = RefGrid::standard();
    double norm2 = 0.0;
    int hint = -1;
    for (std::size_t g = 0; g < grid.nodes.size(); ++g) {
      double val;
      Vec2 gr;
      zoom.eval(grid.nodes[g], val, gr, &hint);
      norm2 += grid.weights[g] * val * val;
    }
    norm2 /= half_ball_area(1.0);
    double n = std::sqrt(std::max(norm2, 1e-300));
    int thint = -1;
    auto trace = [&](double t) {
      double val;
      Vec2 gr;
      zoom.eval(Vec2(t, 0.0), val, gr, &thint);
      return val / n;
    };
    BoundaryZeroSet zs = boundary_zero_set(trace, -window, window, resolution);
    all_roots.push_back(zs.roots);
    if (k + 1 == lambdas.size()) final_zs = std::move(zs);
  }

  auto sets_match = [&](const std::vector<double>& a, const std::vector<double>& b,
                        double tol) {
    for (double ra : a) {
      double best = std::numeric_limits<double>::max();
      for (double rb : b) best = std::min(best, std::abs(ra - rb));
      if (best > tol) return false;
    }
    return true;
  };
  const auto& last = all_roots.back();
  const auto& prev = all_roots[all_roots.size() - 2];
  out.converged = sets_match(last, prev, 4.0 * resolution) &&
                  sets_match(prev, last, 4.0 * resolution);

  // dilation invariance of the final zero set: roots of t -> w(rho t)
  // are roots/rho; compare within the window.
  out.homogeneous = true;
  for (double rho : {0.5, 2.0}) {
    std::vector<double> dil, ref;
    for (double rt : last) {
      double t = rt / rho;
      if (std::abs(t) <= window) dil.push_back(t);
      if (std::abs(rt) <= window) ref.push_back(rt);
    }
    // every dilated root must be a root again (cone property)
    if (!sets_match(dil, ref, 4.0 * resolution)) out.homogeneous = false;
  }
  out.zero_set = std::move(final_zs);
  return out;
}

inline void write_zeros_csv(const BoundaryZeroSet& zs, std::ostream& os) {
  os.precision(17);
  if (zs.ambient_dim == 2) {
    os << "kind,a,b\n";
    for (double r : zs.roots) os << "root," << r << ",\n";
    for (const auto& p : zs.plateaus) os << "plateau," << p.lo << "," << p.hi << "\n";
  } else {
    os << "cell_x,cell_y\n";
    for (const auto& c : zs.cells) os << c[0] << "," << c[1] << "\n";
  }
}

inline void write_boxcount_csv(const BoundaryZeroSet& zs, std::ostream& os) {
  os << "scale,count\n";
  os.precision(17);
  for (std::size_t i = 0; i < zs.scales.size(); ++i)
    os << zs.scales[i] << "," << zs.counts[i] << "\n";
}

}  // namespace ucplab
