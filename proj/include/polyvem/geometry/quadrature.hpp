#pragma once

#include <array>
#include <functional>
#include <vector>

#include "polyvem/geometry/kernel.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

// Gauss-Legendre rules on [0,1]; products of these are pushed through the
// Duffy (collapsed-coordinate) map onto reference simplices. With 4 points
// per axis every monomial of total degree <= 4 on a tetrahedron or triangle
// is integrated exactly, with margin.
namespace quadrature_detail {

struct Node1 {
  double x, w;
};

inline const std::array<Node1, 4>& gauss4() {
  static const std::array<Node1, 4> rule = [] {
    const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
    std::array<Node1, 4> r{};
    const double xs[4] = {-b, -a, a, b};
    const double ws[4] = {wb, wa, wa, wb};
    for (int i = 0; i < 4; ++i) r[i] = {0.5 * (xs[i] + 1.0), 0.5 * ws[i]};
    return r;
  }();
  return rule;
}

struct TetNode {
  double x, y, z, w;
};
struct TriNode {
  double x, y, w;
};

// Reference tetrahedron {x,y,z >= 0, x+y+z <= 1}; weights sum to 1/6.
inline const std::vector<TetNode>& reference_tet_rule() {
  static const std::vector<TetNode> rule = [] {
    std::vector<TetNode> r;
    const auto& g = gauss4();
    for (const Node1& u : g)
      for (const Node1& v : g)
        for (const Node1& w : g) {
          double x = u.x;
          double y = v.x * (1.0 - u.x);
          double z = w.x * (1.0 - u.x) * (1.0 - v.x);
          double jac = (1.0 - u.x) * (1.0 - u.x) * (1.0 - v.x);
          r.push_back({x, y, z, u.w * v.w * w.w * jac});
        }
    return r;
  }();
  return rule;
}

// Reference triangle {x,y >= 0, x+y <= 1}; weights sum to 1/2.
inline const std::vector<TriNode>& reference_tri_rule() {
  static const std::vector<TriNode> rule = [] {
    std::vector<TriNode> r;
    const auto& g = gauss4();
    for (const Node1& u : g)
      for (const Node1& v : g)
        r.push_back({u.x, v.x * (1.0 - u.x), u.w * v.w * (1.0 - u.x)});
    return r;
  }();
  return rule;
}

} // namespace quadrature_detail

using Tet = std::array<Vec3, 4>;

inline double tet_volume(const Tet& t) {
  return dot(t[1] - t[0], cross(t[2] - t[0], t[3] - t[0])) / 6.0;
}

// Integrate a scalar field over one tetrahedron (exact through degree 4).
template <typename F>
double integrate_tet(const Tet& t, F&& f) {
  const Vec3 e1 = t[1] - t[0], e2 = t[2] - t[0], e3 = t[3] - t[0];
  const double det = dot(e1, cross(e2, e3)); // 6 * signed volume
  double s = 0.0;
  for (const auto& q : quadrature_detail::reference_tet_rule()) {
    Vec3 p = t[0] + e1 * q.x + e2 * q.y + e3 * q.z;
    s += q.w * f(p);
  }
  return s * std::abs(det);
}

template <typename F>
double integrate_tets(const std::vector<Tet>& tets, F&& f) {
  double s = 0.0;
  for (const Tet& t : tets) s += integrate_tet(t, f);
  return s;
}

// Integrate a scalar field over a 3D triangle.
template <typename F>
double integrate_triangle(const Vec3& a, const Vec3& b, const Vec3& c, F&& f) {
  const Vec3 e1 = b - a, e2 = c - a;
  const double scale = norm(cross(e1, e2)); // 2 * area
  double s = 0.0;
  for (const auto& q : quadrature_detail::reference_tri_rule()) {
    Vec3 p = a + e1 * q.x + e2 * q.y;
    s += q.w * f(p);
  }
  return s * scale;
}

// Anchor point for the fan decomposition: the barycenter when it lies in the
// cell's kernel, otherwise the kernel centroid. Throws NoKernelPoint when the
// cell is not star-shaped.
inline Vec3 star_anchor(const PolyMesh& mesh, int cell_id) {
  const PolyCell& cell = mesh.cells[cell_id];
  const double margin = -1e-10 * cell.diameter;
  bool inside = true;
  for (std::size_t lf = 0; lf < cell.face_ids.size(); ++lf) {
    const PolyFace& f = mesh.faces[cell.face_ids[lf]];
    Vec3 n_out = mesh.outward_normal(cell, lf);
    if (dot(n_out, cell.barycenter - f.centroid) > margin) {
      inside = false;
      break;
    }
  }
  if (inside) return cell.barycenter;
  ConvexPolyhedron k = kernel3d(mesh, cell_id);
  if (k.empty() || k.volume() <= kGeomEps) throw NoKernelPoint(cell_id);
  return k.centroid();
}

// Fan decomposition of a star-shaped cell: one tetrahedron per face edge,
// (anchor, face centroid, edge endpoints), positively oriented.
inline std::vector<Tet> decompose_into_tets(const PolyMesh& mesh, int cell_id) {
  const PolyCell& cell = mesh.cells[cell_id];
  Vec3 anchor = star_anchor(mesh, cell_id);
  std::vector<Tet> tets;
  for (std::size_t lf = 0; lf < cell.face_ids.size(); ++lf) {
    const PolyFace& f = mesh.faces[cell.face_ids[lf]];
    std::vector<int> loop = mesh.oriented_face_loop(cell, lf);
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& p = mesh.point(loop[i]);
      const Vec3& q = mesh.point(loop[(i + 1) % loop.size()]);
      tets.push_back({anchor, f.centroid, p, q});
    }
  }
  return tets;
}

template <typename F>
double integrate_cell(const PolyMesh& mesh, int cell_id, F&& f) {
  return integrate_tets(decompose_into_tets(mesh, cell_id), std::forward<F>(f));
}

// Fan the face from its centroid and integrate triangle by triangle.
template <typename F>
double integrate_face(const PolyMesh& mesh, int face_id, F&& f) {
  const PolyFace& face = mesh.faces[face_id];
  double s = 0.0;
  for (std::size_t i = 0; i < face.vertex_loop.size(); ++i) {
    const Vec3& p = mesh.point(face.vertex_loop[i]);
    const Vec3& q = mesh.point(face.vertex_loop[(i + 1) % face.vertex_loop.size()]);
    s += integrate_triangle(face.centroid, p, q, f);
  }
  return s;
}

} // namespace polyvem
