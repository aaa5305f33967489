#pragma once

// Conforming P1 triangulations of half-disks, disks and graph domains.
//
// Construction is structured: concentric rings whose spacing follows the
// grading law size(rho) = max(h * (rho/R)^(grading-1), h^2), a center fan,
// and an angle-merge strip triangulation between consecutive rings. Flat
// boundary vertices carry y = 0 exactly; the disk mesh is a mirror image of
// the half-disk mesh so the vertex set is symmetric to the last bit; graph
// meshes are the shear image (z1, z2 + phi(z1)) of a half-disk mesh, so
// boundary vertices satisfy y = phi(x) exactly.

#include "ucplab/core.hpp"
#include "ucplab/geometry.hpp"

#include <array>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

namespace ucplab {

enum class BoundaryTag { flat, arc };

struct BoundaryEdge {
  int a = 0, b = 0;
  BoundaryTag tag = BoundaryTag::flat;
};

enum class DomainKind { half_ball, full_ball, graph, mapped };

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;

  DomainKind kind = DomainKind::half_ball;
  double radius = 1.0;   // generation radius R
  double h = 0.1;        // target element size at the rim
  double grading = 1.0;

  // Local element size of the generating law; used to adapt quadrature.
  double size_at(double rho) const {
    double s = h * std::pow(std::max(rho, 0.0) / radius, grading - 1.0);
    return std::max(std::min(s, h), h * h);
  }

  double tri_area(int t) const {
    const auto& tr = triangles[t];
    Vec2 e1 = vertices[tr[1]] - vertices[tr[0]];
    Vec2 e2 = vertices[tr[2]] - vertices[tr[0]];
    return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
  }

  // Outward unit normal of a boundary edge, from its (unique) triangle.
  Vec2 edge_normal(const BoundaryEdge& e, int adjacent_tri) const {
    Vec2 a = vertices[e.a], b = vertices[e.b];
    Vec2 t = b - a;
    Vec2 n(t.y(), -t.x());
    n.normalize();
    const auto& tr = triangles[adjacent_tri];
    Vec2 c = (vertices[tr[0]] + vertices[tr[1]] + vertices[tr[2]]) / 3.0;
    if (n.dot(c - 0.5 * (a + b)) > 0.0) n = -n;
    return n;
  }
};

namespace meshdetail {

struct RingLayout {
  std::vector<double> radii;       // ascending, innermost first, last = R
  std::vector<int> segments;       // vertices per ring = segments + 1
};

inline double size_law(double rho, double R, double h, double g) {
  double s = h * std::pow(rho / R, g - 1.0);
  return std::max(std::min(s, h), h * h);
}

inline RingLayout ring_layout(double R, double h, double g) {
  if (!(h > 0.0) || h >= R) throw Error("mesh: need 0 < h < R");
  if (g < 1.0 || g > 4.0) throw Error("mesh: grading must lie in [1,4]");
  std::vector<double> radii;
  double r = R;
  radii.push_back(r);
  for (;;) {
    double next = r - size_law(r, R, h, g);
    if (next <= 0.0 || next <= 0.75 * size_law(next, R, h, g)) break;
    radii.push_back(next);
    r = next;
    if (radii.size() > 2000000) throw Error("mesh: ring budget exceeded");
  }
  std::reverse(radii.begin(), radii.end());
  RingLayout lay;
  lay.radii = std::move(radii);
  lay.segments.reserve(lay.radii.size());
  int prev = 3;
  for (double rk : lay.radii) {
    int n = std::max(3, static_cast<int>(std::lround(kPi * rk / size_law(rk, R, h, g))));
    n = std::max(n, prev);  // monotone outward keeps strips well shaped
    lay.segments.push_back(n);
    prev = n;
  }
  return lay;
}

// Vertex on ring (radius rho, n segments) at angular index j in [0, n].
// The endpoints are pinned to the axis exactly.
inline Vec2 ring_vertex(double rho, int n, int j) {
  if (j == 0) return Vec2(rho, 0.0);
  if (j == n) return Vec2(-rho, 0.0);
  if (2 * j == n) return Vec2(0.0, rho);
  double th = kPi * j / n;
  return Vec2(rho * std::cos(th), rho * std::sin(th));
}

inline void strip(std::vector<std::array<int, 3>>& tris, const std::vector<int>& inner,
                  const std::vector<int>& outer) {
  int na = static_cast<int>(inner.size()) - 1;
  int nb = static_cast<int>(outer.size()) - 1;
  int i = 0, j = 0;
  while (i < na || j < nb) {
    bool advance_outer;
    if (i == na) advance_outer = true;
    else if (j == nb) advance_outer = false;
    else advance_outer = (j + 1) * static_cast<long long>(na) <= (i + 1) * static_cast<long long>(nb);
    if (advance_outer) {
      tris.push_back({inner[i], outer[j], outer[j + 1]});
      ++j;
    } else {
      tris.push_back({inner[i], outer[j], inner[i + 1]});
      ++i;
    }
  }
}

inline void extract_boundary(Mesh& m) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  m.boundary.clear();
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      if (count[{std::min(a, b), std::max(a, b)}] == 1) {
        BoundaryEdge e;
        e.a = a;
        e.b = b;
        bool flat = (m.vertices[a].y() == 0.0 && m.vertices[b].y() == 0.0);
        e.tag = flat ? BoundaryTag::flat : BoundaryTag::arc;
        m.boundary.push_back(e);
      }
    }
  }
}

inline void validate(const Mesh& m) {
  if (m.triangles.size() < 50)
    throw Error("mesh: only " + std::to_string(m.triangles.size()) +
                " triangles; decrease h");
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
    if (m.tri_area(static_cast<int>(t)) <= 0.0)
      throw Error("mesh: inverted triangle " + std::to_string(t));
}

}  // namespace meshdetail

inline double mesh_min_angle(const Mesh& m) {
  double best = kPi;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      Vec2 a = m.vertices[t[k]];
      Vec2 u = m.vertices[t[(k + 1) % 3]] - a;
      Vec2 v = m.vertices[t[(k + 2) % 3]] - a;
      double c = u.dot(v) / (u.norm() * v.norm());
      best = std::min(best, std::acos(std::clamp(c, -1.0, 1.0)));
    }
  }
  return best * 180.0 / kPi;
}

inline Mesh build_half_disk(double R, double h, double grading = 1.0) {
  using namespace meshdetail;
  RingLayout lay = ring_layout(R, h, grading);

  Mesh m;
  m.kind = DomainKind::half_ball;
  m.radius = R;
  m.h = h;
  m.grading = grading;

  m.vertices.push_back(Vec2(0.0, 0.0));
  std::vector<std::vector<int>> ring_ids(lay.radii.size());
  for (std::size_t k = 0; k < lay.radii.size(); ++k) {
    int n = lay.segments[k];
    ring_ids[k].resize(n + 1);
    for (int j = 0; j <= n; ++j) {
      ring_ids[k][j] = static_cast<int>(m.vertices.size());
      m.vertices.push_back(ring_vertex(lay.radii[k], n, j));
    }
  }
  // center fan
  for (int j = 0; j < lay.segments[0]; ++j)
    m.triangles.push_back({0, ring_ids[0][j], ring_ids[0][j + 1]});
  for (std::size_t k = 0; k + 1 < lay.radii.size(); ++k)
    strip(m.triangles, ring_ids[k], ring_ids[k + 1]);

  extract_boundary(m);
  validate(m);
  return m;
}

// Full disk as the exact mirror image of a half-disk mesh. Also used to
// extend an already-mapped half-ball mesh across its flat boundary; the
// mirror index map is returned through `mirror_of` when requested.
inline Mesh mirror_mesh(const Mesh& upper, std::vector<int>* mirror_of = nullptr) {
  for (const auto& e : upper.boundary)
    if (e.tag == BoundaryTag::flat &&
        (upper.vertices[e.a].y() != 0.0 || upper.vertices[e.b].y() != 0.0))
      throw Error("mirror_mesh: flat boundary not on y = 0");

  Mesh m;
  m.kind = DomainKind::full_ball;
  m.radius = upper.radius;
  m.h = upper.h;
  m.grading = upper.grading;
  m.vertices = upper.vertices;
  m.triangles = upper.triangles;

  std::vector<int> mirror(upper.vertices.size());
  for (std::size_t i = 0; i < upper.vertices.size(); ++i) {
    if (upper.vertices[i].y() == 0.0) {
      mirror[i] = static_cast<int>(i);
    } else {
      mirror[i] = static_cast<int>(m.vertices.size());
      m.vertices.push_back(Vec2(upper.vertices[i].x(), -upper.vertices[i].y()));
    }
  }
  for (const auto& t : upper.triangles)
    m.triangles.push_back({mirror[t[0]], mirror[t[2]], mirror[t[1]]});

  meshdetail::extract_boundary(m);
  meshdetail::validate(m);
  if (mirror_of) *mirror_of = std::move(mirror);
  return m;
}

inline Mesh build_disk(double R, double h, double grading = 1.0) {
  return mirror_mesh(build_half_disk(R, h, grading));
}

// Shear image of a half-disk mesh: vertex (z1, z2) -> (z1, z2 + phi(z1)).
// Graph-boundary vertices get y = phi(x) by the same evaluation that any
// later check performs, so the identity holds exactly.
inline Mesh build_graph_mesh(const GraphDomain& dom, double h, double grading = 1.0) {
  Mesh m = build_half_disk(dom.extent, h, grading);
  for (auto& v : m.vertices) v.y() += dom.height(v.x());
  m.kind = DomainKind::graph;
  meshdetail::validate(m);
  if (mesh_min_angle(m) < 10.0)
    throw Error("build_graph_mesh: shear degrades mesh below 10 degrees; reduce slope or h");
  return m;
}

// Apply a point map to every vertex. Orientation must be preserved
// (positive determinant maps only); boundary tags carry over.
template <typename Map>
inline Mesh map_mesh(const Mesh& src, const Map& map) {
  Mesh m = src;
  m.kind = DomainKind::mapped;
  for (auto& v : m.vertices) v = map.apply(v);
  meshdetail::validate(m);
  return m;
}

inline void write_mesh(const Mesh& m, std::ostream& os) {
  os.precision(17);
  for (const auto& v : m.vertices) os << "v " << v.x() << " " << v.y() << "\n";
  for (const auto& t : m.triangles) os << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (const auto& e : m.boundary)
    os << "e " << e.a << " " << e.b << " "
       << (e.tag == BoundaryTag::flat ? "flat" : "arc") << "\n";
}

inline Mesh read_mesh(std::istream& is) {
  Mesh m;
  std::string kind;
  int line = 0;
  while (is >> kind) {
    ++line;
    if (kind == "v") {
      double x, y;
      if (!(is >> x >> y)) throw Error("read_mesh: bad vertex record " + std::to_string(line));
      m.vertices.push_back(Vec2(x, y));
    } else if (kind == "t") {
      int a, b, c;
      if (!(is >> a >> b >> c)) throw Error("read_mesh: bad triangle record " + std::to_string(line));
      m.triangles.push_back({a, b, c});
    } else if (kind == "e") {
      int a, b;
      std::string tag;
      if (!(is >> a >> b >> tag)) throw Error("read_mesh: bad edge record " + std::to_string(line));
      BoundaryEdge e;
      e.a = a;
      e.b = b;
      if (tag == "flat") e.tag = BoundaryTag::flat;
      else if (tag == "arc") e.tag = BoundaryTag::arc;
      else throw Error("read_mesh: unknown edge tag '" + tag + "'");
      m.boundary.push_back(e);
    } else {
      throw Error("read_mesh: unknown record '" + kind + "'");
    }
  }
  int nv = static_cast<int>(m.vertices.size());
  for (const auto& t : m.triangles)
    for (int k : t)
      if (k < 0 || k >= nv) throw Error("read_mesh: triangle index out of range");
  for (const auto& e : m.boundary)
    if (e.a < 0 || e.a >= nv || e.b < 0 || e.b >= nv)
      throw Error("read_mesh: edge index out of range");
  if (m.triangles.empty()) throw Error("read_mesh: no triangles");
  // The text format carries no generation metadata; reconstruct what the
  // size-law consumers need conservatively.
  m.radius = 0.0;
  for (const auto& v : m.vertices) m.radius = std::max(m.radius, v.norm());
  m.h = 0.0;
  for (const auto& e : m.boundary)
    m.h = std::max(m.h, (m.vertices[e.a] - m.vertices[e.b]).norm());
  m.grading = 1.0;
  return m;
}

}  // namespace ucplab
