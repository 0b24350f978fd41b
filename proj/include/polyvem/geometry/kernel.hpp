#pragma once

#include <vector>

#include "polyvem/geometry/convex_clip.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

// Kernel of a simple polygon: the set of points that see the whole polygon,
// equal to the intersection of the inner half-planes of all edges. Computed
// by clipping the polygon's bounding box edge by edge; an empty result means
// the polygon is not star-shaped.
inline ConvexPolygon2 kernel2d(const std::vector<Vec2>& polygon) {
  if (polygon.size() < 3) return {};
  std::vector<Vec2> pts = polygon;
  if (polygon_area2(pts) < 0.0) std::reverse(pts.begin(), pts.end());

  Vec2 lo = pts[0], hi = pts[0];
  for (const Vec2& p : pts) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  ConvexPolygon2 k{{{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}}};
  for (std::size_t i = 0; i < pts.size() && !k.empty(); ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % pts.size()];
    k = k.clip_left_of(a, b - a); // interior of a CCW polygon lies left of each edge
  }
  return k;
}

inline ConvexPolygon2 face_kernel(const PolyMesh& mesh, int face_id) {
  return kernel2d(mesh.faces[face_id].frame_loop);
}

// Kernel of a polyhedral cell: intersection of the inner half-spaces of all
// face planes, clipped from the cell's bounding box. Exact for planar-faced
// cells; an empty polyhedron encodes "not star-shaped".
inline ConvexPolyhedron kernel3d(const PolyMesh& mesh, int cell_id) {
  const PolyCell& cell = mesh.cells[cell_id];
  Vec3 lo = mesh.point(cell.vertex_ids[0]);
  Vec3 hi = lo;
  for (int v : cell.vertex_ids) {
    const Vec3& p = mesh.point(v);
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  ConvexPolyhedron k = ConvexPolyhedron::axis_box(lo, hi);
  for (std::size_t lf = 0; lf < cell.face_ids.size() && !k.empty(); ++lf) {
    const PolyFace& f = mesh.faces[cell.face_ids[lf]];
    Vec3 n_out = mesh.outward_normal(cell, lf);
    k = k.clip(plane_through(f.centroid, n_out));
  }
  return k;
}

inline double kernel_volume(const PolyMesh& mesh, int cell_id) {
  ConvexPolyhedron k = kernel3d(mesh, cell_id);
  return k.empty() ? 0.0 : k.volume();
}

} // namespace polyvem
