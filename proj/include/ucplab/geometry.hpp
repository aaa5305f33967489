#pragma once

// Domains and the changes of variables used to bring a problem into the
// model half-ball position:
//   * LinearChange / normalizing_map: z = Psi x with Psi A0 Psi^T = I and the
//     half-space {x_d > 0} preserved.
//   * FlatteningMap: graph shear (x', x_d - phi(x')) followed by a cutoff
//     conormal shear that kills the off-diagonal a_{id} row on the flat
//     boundary.

#include "ucplab/core.hpp"
#include "ucplab/expr.hpp"

#include <functional>
#include <optional>

namespace ucplab {

struct HalfBall {
  double radius = 1.0;
  int dim = 2;

  HalfBall() = default;
  HalfBall(double r, int d = 2) : radius(r), dim(d) {
    if (!(radius > 0.0)) throw Error("HalfBall: radius must be positive");
    if (dim != 2 && dim != 3) throw Error("HalfBall: dim must be 2 or 3");
  }
  bool contains(const Vec2& p) const {
    return p.y() >= 0.0 && p.squaredNorm() <= radius * radius;
  }
};

// {(x, y) : y > phi(x), |x| < extent} with phi(0) = 0, phi'(0) = 0.
struct GraphDomain {
  Expr phi;
  Expr dphi;
  double extent = 1.0;
  double lip = 0.0;       // sup |phi'| over [-extent, extent], sampled
  double grad_lip = 0.0;  // sup |phi''|, sampled

  GraphDomain() = default;
  GraphDomain(Expr phi_, double extent_) : phi(std::move(phi_)), extent(extent_) {
    if (!(extent > 0.0)) throw Error("GraphDomain: extent must be positive");
    dphi = phi.derivative("x");
    Expr ddphi = dphi.derivative("x");
    if (std::abs(phi(0.0, 0.0)) > 1e-12)
      throw Error("GraphDomain: phi(0) must vanish");
    if (std::abs(dphi(0.0, 0.0)) > 1e-10)
      throw Error("GraphDomain: phi'(0) must vanish");
    for (int i = 0; i <= 200; ++i) {
      double x = -extent + 2.0 * extent * i / 200.0;
      lip = std::max(lip, std::abs(dphi(x, 0.0)));
      grad_lip = std::max(grad_lip, std::abs(ddphi(x, 0.0)));
    }
  }
  double height(double x) const { return phi(x, 0.0); }
  double slope(double x) const { return dphi(x, 0.0); }
  bool contains(const Vec2& p) const {
    return std::abs(p.x()) <= extent && p.y() >= height(p.x());
  }
};

// Invertible linear map with its inverse stored explicitly.
class LinearChange {
 public:
  LinearChange() = default;
  explicit LinearChange(MatX fwd) : fwd_(std::move(fwd)) {
    if (fwd_.rows() != fwd_.cols()) throw Error("LinearChange: square matrix required");
    Eigen::FullPivLU<MatX> lu(fwd_);
    if (!lu.isInvertible()) throw Error("LinearChange: singular matrix");
    inv_ = lu.inverse();
    MatX err = fwd_ * inv_ - MatX::Identity(fwd_.rows(), fwd_.cols());
    if (err.cwiseAbs().maxCoeff() > 1e-12)
      throw Error("LinearChange: inverse check failed");
  }

  int dim() const { return static_cast<int>(fwd_.rows()); }
  const MatX& matrix() const { return fwd_; }
  const MatX& inverse_matrix() const { return inv_; }
  double det() const { return fwd_.determinant(); }

  VecX apply(const VecX& p) const { return fwd_ * p; }
  VecX apply_inverse(const VecX& p) const { return inv_ * p; }
  Vec2 apply(const Vec2& p) const { return (fwd_ * p).eval(); }
  Vec2 apply_inverse(const Vec2& p) const { return (inv_ * p).eval(); }

 private:
  MatX fwd_, inv_;
};

namespace detail {
inline void check_spd(const MatX& A, const char* who) {
  if (A.rows() != A.cols()) throw Error(std::string(who) + ": square matrix required");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff()))
    throw Error(std::string(who) + ": matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<MatX> es(A);
  if (es.eigenvalues().minCoeff() <= 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw Error(std::string(who) + ": matrix not positive definite");
}
}  // namespace detail

// Shear that zeroes the last column of A0 off the diagonal:
// Theta = I except Theta_{id} = -a_{id}/a_{dd} for i < d.
inline MatX theta_matrix(const MatX& A0) {
  detail::check_spd(A0, "theta_matrix");
  int d = static_cast<int>(A0.rows());
  MatX T = MatX::Identity(d, d);
  for (int i = 0; i + 1 < d; ++i) T(i, d - 1) = -A0(i, d - 1) / A0(d - 1, d - 1);
  return T;
}

// Psi = (Theta A0 Theta^T)^(-1/2) Theta, so Psi A0 Psi^T = I. The shear makes
// Theta A0 Theta^T block diagonal with (d,d) entry a_dd; the inverse square
// root of a block-diagonal SPD matrix keeps that structure, so the last row
// of Psi is (0,...,0,a_dd^(-1/2)) and the half-space {x_d > 0} is preserved.
inline LinearChange normalizing_map(const MatX& A0) {
  MatX T = theta_matrix(A0);
  MatX M = T * A0 * T.transpose();
  Eigen::SelfAdjointEigenSolver<MatX> es(M);
  if (es.eigenvalues().minCoeff() <= 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw Error("normalizing_map: degenerate coefficient matrix");
  VecX inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  MatX Minvsqrt = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  return LinearChange(Minvsqrt * T);
}

// Two-stage flattening of a graph domain. Stage one is the volume-preserving
// graph shear y = (x1, x2 - phi(x1)). Stage two straightens the conormal on
// the flat boundary: T(y) = (y1 + y2 * chi(y2) * c(y1), y2) where
// c = -atilde_12/atilde_22 is computed from the stage-one pushforward of the
// boundary coefficients and chi is a C^2 cutoff supported near y2 = 0.
class FlatteningMap {
 public:
  using MatrixField = std::function<Mat2(const Vec2&)>;

  FlatteningMap(const GraphDomain& dom, std::optional<MatrixField> A = std::nullopt)
      : dom_(dom), extent_(dom.extent) {
    cut_lo_ = 0.1 * extent_;
    cut_hi_ = 0.5 * extent_;
    if (A) {
      MatrixField Af = std::move(*A);
      // c(y1) from the graph-shear pushforward of A at the boundary point
      // (y1, phi(y1)); det(J) = 1 there.
      conormal_ = [dom, Af](double y1) {
        double s = dom.slope(y1);
        Mat2 a = Af(Vec2(y1, dom.height(y1)));
        double a12 = a(0, 1) - s * a(0, 0);
        double a22 = s * s * a(0, 0) - 2.0 * s * a(0, 1) + a(1, 1);
        return -a12 / a22;
      };
    }
  }

  bool has_conormal_stage() const { return static_cast<bool>(conormal_); }
  double extent() const { return extent_; }

  Vec2 apply(const Vec2& x) const {
    if (std::abs(x.x()) > extent_ * (1.0 + 1e-12))
      throw Error("FlatteningMap: point outside graph extent");
    double y2 = x.y() - dom_.height(x.x());
    if (y2 < -1e-10 * extent_) throw Error("FlatteningMap: point below graph");
    Vec2 y(x.x(), y2);
    return shear(y);
  }

  Vec2 apply_inverse(const Vec2& z) const {
    if (z.y() < -1e-10 * extent_) throw Error("FlatteningMap: inverse point below y = 0");
    Vec2 y = unshear(z);
    return Vec2(y.x(), y.y() + dom_.height(y.x()));
  }

  // Jacobian of the full composition at the source point x.
  Mat2 jacobian(const Vec2& x) const {
    Mat2 Jg;
    Jg << 1.0, 0.0, -dom_.slope(x.x()), 1.0;
    double y2 = x.y() - dom_.height(x.x());
    Vec2 y(x.x(), y2);
    return shear_jacobian(y) * Jg;
  }

 private:
  GraphDomain dom_;
  double extent_, cut_lo_, cut_hi_;
  std::function<double(double)> conormal_;

  double c_at(double y1) const { return conormal_ ? conormal_(y1) : 0.0; }

  Vec2 shear(const Vec2& y) const {
    if (!conormal_) return y;
    double chi = cutoff_c2(y.y(), cut_lo_, cut_hi_);
    return Vec2(y.x() + y.y() * chi * c_at(y.x()), y.y());
  }

  Mat2 shear_jacobian(const Vec2& y) const {
    Mat2 J = Mat2::Identity();
    if (!conormal_) return J;
    double chi = cutoff_c2(y.y(), cut_lo_, cut_hi_);
    double dchi = cutoff_c2_deriv(y.y(), cut_lo_, cut_hi_);
    double c = c_at(y.x());
    double h = 1e-6 * std::max(1.0, extent_);
    double dc = (c_at(y.x() + h) - c_at(y.x() - h)) / (2.0 * h);
    J(0, 0) = 1.0 + y.y() * chi * dc;
    J(0, 1) = chi * c + y.y() * dchi * c;
    return J;
  }

  Vec2 unshear(const Vec2& z) const {
    if (!conormal_) return z;
    // Fixed point in y1: the shear displacement is a contraction for the
    // cutoffs and slopes we allow.
    double y1 = z.x();
    for (int it = 0; it < 100; ++it) {
      double chi = cutoff_c2(z.y(), cut_lo_, cut_hi_);
      double next = z.x() - z.y() * chi * c_at(y1);
      if (std::abs(next - y1) < 1e-14 * std::max(1.0, extent_)) {
        y1 = next;
        break;
      }
      y1 = next;
    }
    return Vec2(y1, z.y());
  }
};

}  // namespace ucplab
