#pragma once

// Piecewise-linear fields on a mesh. Point location is jump-and-walk over
// the triangle adjacency, seeded from a coarse bucket grid; consecutive
// queries (quadrature sweeps) amortize to a couple of steps. A linear scan
// backs the walk up, so location never fails for points inside the mesh.

#include "ucplab/core.hpp"
#include "ucplab/mesh.hpp"

#include <limits>
#include <map>
#include <memory>
#include <ostream>

namespace ucplab {

class Locator {
 public:
  explicit Locator(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
    build_adjacency();
    build_seeds();
  }

  const Mesh& mesh() const { return *mesh_; }

  // Barycentric coordinates of p in triangle t (unnormalized tolerance).
  Vec3 barycentric(int t, const Vec2& p) const {
    const auto& tr = mesh_->triangles[t];
    Vec2 a = mesh_->vertices[tr[0]], b = mesh_->vertices[tr[1]], c = mesh_->vertices[tr[2]];
    double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    double l1 = ((b.x() - p.x()) * (c.y() - p.y()) - (c.x() - p.x()) * (b.y() - p.y())) / det;
    double l2 = ((c.x() - p.x()) * (a.y() - p.y()) - (a.x() - p.x()) * (c.y() - p.y())) / det;
    return Vec3(l1, l2, 1.0 - l1 - l2);
  }

  // Returns the containing triangle or -1. `hint` is updated.
  int locate(const Vec2& p, int* hint = nullptr) const {
    constexpr double kTol = -1e-11;
    int t = (hint && *hint >= 0 && *hint < static_cast<int>(mesh_->triangles.size()))
                ? *hint
                : seed_for(p);
    int steps = 0;
    const int max_steps = static_cast<int>(mesh_->triangles.size()) + 8;
    while (t >= 0 && steps++ < max_steps) {
      Vec3 l = barycentric(t, p);
      int worst = 0;
      double lmin = l[0];
      if (l[1] < lmin) { lmin = l[1]; worst = 1; }
      if (l[2] < lmin) { lmin = l[2]; worst = 2; }
      if (lmin >= kTol) {
        if (hint) *hint = t;
        return t;
      }
      // cross the edge opposite to the most negative coordinate
      int next = adjacency_[3 * t + worst];
      if (next < 0) {
        // walked out of the domain; try the second-worst direction once
        int second = -1;
        double smin = std::numeric_limits<double>::max();
        for (int k = 0; k < 3; ++k)
          if (k != worst && l[k] < smin && adjacency_[3 * t + k] >= 0) {
            smin = l[k];
            second = adjacency_[3 * t + k];
          }
        if (second < 0 || smin >= kTol) break;
        next = second;
      }
      t = next;
    }
    // fallback: exhaustive scan (should be rare)
    for (int s = 0; s < static_cast<int>(mesh_->triangles.size()); ++s) {
      Vec3 l = barycentric(s, p);
      if (l.minCoeff() >= kTol) {
        if (hint) *hint = s;
        return s;
      }
    }
    return -1;
  }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<int> adjacency_;  // 3 per triangle, neighbor opposite vertex k or -1
  std::vector<int> seeds_;
  double sx_ = 0, sy_ = 0, cell_ = 1;
  int gn_ = 1;

  void build_adjacency() {
    const auto& tris = mesh_->triangles;
    adjacency_.assign(3 * tris.size(), -1);
    std::map<std::pair<int, int>, std::pair<int, int>> half;  // edge -> (tri, opp)
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      for (int k = 0; k < 3; ++k) {
        int a = tris[t][(k + 1) % 3], b = tris[t][(k + 2) % 3];
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        auto it = half.find(key);
        if (it == half.end()) {
          half[key] = {t, k};
        } else {
          adjacency_[3 * t + k] = it->second.first;
          adjacency_[3 * it->second.first + it->second.second] = t;
        }
      }
    }
  }

  void build_seeds() {
    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& v : mesh_->vertices) {
      xmin = std::min(xmin, v.x());
      xmax = std::max(xmax, v.x());
      ymin = std::min(ymin, v.y());
      ymax = std::max(ymax, v.y());
    }
    gn_ = 48;
    sx_ = xmin;
    sy_ = ymin;
    cell_ = std::max(xmax - xmin, ymax - ymin) / gn_ + 1e-300;
    seeds_.assign(gn_ * gn_, -1);
    for (int t = 0; t < static_cast<int>(mesh_->triangles.size()); ++t) {
      const auto& tr = mesh_->triangles[t];
      Vec2 c = (mesh_->vertices[tr[0]] + mesh_->vertices[tr[1]] + mesh_->vertices[tr[2]]) / 3.0;
      int ix = std::clamp(static_cast<int>((c.x() - sx_) / cell_), 0, gn_ - 1);
      int iy = std::clamp(static_cast<int>((c.y() - sy_) / cell_), 0, gn_ - 1);
      if (seeds_[iy * gn_ + ix] < 0) seeds_[iy * gn_ + ix] = t;
    }
    // fill empty cells from any seeded neighbor, a few sweeps suffice
    for (int sweep = 0; sweep < gn_; ++sweep) {
      bool changed = false;
      for (int iy = 0; iy < gn_; ++iy)
        for (int ix = 0; ix < gn_; ++ix) {
          if (seeds_[iy * gn_ + ix] >= 0) continue;
          for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            int jx = ix + dx, jy = iy + dy;
            if (jx < 0 || jy < 0 || jx >= gn_ || jy >= gn_) continue;
            if (seeds_[jy * gn_ + jx] >= 0) {
              seeds_[iy * gn_ + ix] = seeds_[jy * gn_ + jx];
              changed = true;
              break;
            }
          }
        }
      if (!changed) break;
    }
  }

  int seed_for(const Vec2& p) const {
    int ix = std::clamp(static_cast<int>((p.x() - sx_) / cell_), 0, gn_ - 1);
    int iy = std::clamp(static_cast<int>((p.y() - sy_) / cell_), 0, gn_ - 1);
    int s = seeds_[iy * gn_ + ix];
    return s >= 0 ? s : 0;
  }
};

class SolutionField {
 public:
  SolutionField() = default;
  SolutionField(std::shared_ptr<const Mesh> mesh, VecX values)
      : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != static_cast<Eigen::Index>(mesh_->vertices.size()))
      throw Error("SolutionField: value count does not match vertex count");
    locator_ = std::make_shared<Locator>(mesh_);
  }

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const VecX& nodal() const { return values_; }
  const Locator& locator() const { return *locator_; }

  double value(const Vec2& p, int* hint = nullptr) const {
    int t = locate_or_throw(p, hint);
    Vec3 l = locator_->barycentric(t, p);
    const auto& tr = mesh_->triangles[t];
    return l[0] * values_[tr[0]] + l[1] * values_[tr[1]] + l[2] * values_[tr[2]];
  }

  // Gradient of the P1 interpolant on the triangle containing p.
  Vec2 gradient(const Vec2& p, int* hint = nullptr) const {
    int t = locate_or_throw(p, hint);
    return tri_gradient(t);
  }

  void value_and_gradient(const Vec2& p, double& val, Vec2& grad, int* hint = nullptr) const {
    int t = locate_or_throw(p, hint);
    Vec3 l = locator_->barycentric(t, p);
    const auto& tr = mesh_->triangles[t];
    val = l[0] * values_[tr[0]] + l[1] * values_[tr[1]] + l[2] * values_[tr[2]];
    grad = tri_gradient(t);
  }

  Vec2 tri_gradient(int t) const {
    const auto& tr = mesh_->triangles[t];
    Vec2 a = mesh_->vertices[tr[0]], b = mesh_->vertices[tr[1]], c = mesh_->vertices[tr[2]];
    double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    Vec2 gb((c.y() - a.y()) / det, (a.x() - c.x()) / det);
    Vec2 gc((a.y() - b.y()) / det, (b.x() - a.x()) / det);
    Vec2 ga = -gb - gc;
    return values_[tr[0]] * ga + values_[tr[1]] * gb + values_[tr[2]] * gc;
  }

  double sup_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

  void write_csv(std::ostream& os) const {
    os << "vertex_index,x,y,value\n";
    os.precision(17);
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      os << i << "," << mesh_->vertices[i].x() << "," << mesh_->vertices[i].y() << ","
         << values_[i] << "\n";
  }

 private:
  std::shared_ptr<const Mesh> mesh_;
  VecX values_;
  std::shared_ptr<Locator> locator_;

  int locate_or_throw(const Vec2& p, int* hint) const {
    int local = -1;
    int t = locator_->locate(p, hint ? hint : &local);
    if (t < 0)
      throw Error("SolutionField: point (" + std::to_string(p.x()) + ", " +
                  std::to_string(p.y()) + ") outside mesh");
    return t;
  }
};

}  // namespace ucplab
