#pragma once

#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/vec3.hpp"

namespace polyvem {

// Absolute floor for areas and volumes; anything below is degenerate.
inline constexpr double kGeomEps = 1e-12;

// Planarity tolerance is relative to the face diameter.
inline constexpr double kPlanarRelEps = 1e-9;

// All derived quantities of a planar polygonal face: measure, centroid,
// diameter, unit normal and an orthonormal in-plane frame (axis_u, axis_v)
// centered at the centroid. frame_loop holds the vertices in that frame, so
// the centroid maps to (0,0).
struct FaceGeometry {
  double area = 0.0;
  Vec3 centroid;
  double diameter = 0.0;
  Vec3 normal;
  Vec3 axis_u, axis_v;
  std::vector<Vec2> frame_loop;
  double plane_deviation = 0.0; // max distance of a loop vertex from the best-fit plane
};

inline Vec3 newell_normal(const std::vector<Vec3>& loop) {
  Vec3 n{0, 0, 0};
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[(i + 1) % loop.size()];
    n += cross(a, b);
  }
  return n;
}

inline double polygon_area2(const std::vector<Vec2>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % pts.size()];
    s += cross2(a, b);
  }
  return 0.5 * s;
}

inline Vec2 polygon_centroid2(const std::vector<Vec2>& pts, double area) {
  Vec2 c{0, 0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % pts.size()];
    double w = cross2(a, b);
    c.x += (a.x + b.x) * w;
    c.y += (a.y + b.y) * w;
  }
  return c / (6.0 * area);
}

template <typename PointRange>
double max_pairwise_distance(const PointRange& pts) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double t = norm2(pts[i] - pts[j]);
      if (t > d2) d2 = t;
    }
  return std::sqrt(d2);
}

// Measures of a polygonal face given its vertex loop in space. Throws
// DegenerateElement when the loop is collinear or encloses no area.
inline FaceGeometry compute_face_geometry(const std::vector<Vec3>& loop, std::size_t face_id = 0) {
  if (loop.size() < 3) throw DegenerateElement(face_id, "face with fewer than 3 vertices");
  Vec3 nraw = newell_normal(loop);
  double nlen = norm(nraw);
  if (0.5 * nlen <= kGeomEps) throw DegenerateElement(face_id, "zero-area face");

  FaceGeometry g;
  g.normal = nraw / nlen;

  // In-plane axes: orthogonalize the coordinate axis least aligned with n.
  int k = 0;
  double best = std::abs(g.normal.x);
  if (std::abs(g.normal.y) < best) { k = 1; best = std::abs(g.normal.y); }
  if (std::abs(g.normal.z) < best) { k = 2; }
  Vec3 e{0, 0, 0};
  e[k] = 1.0;
  g.axis_u = normalized(e - g.normal * dot(g.normal, e));
  g.axis_v = cross(g.normal, g.axis_u);

  const Vec3& origin = loop[0];
  g.frame_loop.resize(loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) {
    Vec3 r = loop[i] - origin;
    g.frame_loop[i] = {dot(r, g.axis_u), dot(r, g.axis_v)};
  }
  g.area = polygon_area2(g.frame_loop);
  if (g.area <= kGeomEps) throw DegenerateElement(face_id, "non-positive face area");

  Vec2 c2 = polygon_centroid2(g.frame_loop, g.area);
  g.centroid = origin + g.axis_u * c2.x + g.axis_v * c2.y;
  for (auto& p : g.frame_loop) p = p - c2;

  g.diameter = max_pairwise_distance(loop);

  double dev = 0.0;
  for (const Vec3& p : loop) dev = std::max(dev, std::abs(dot(g.normal, p - g.centroid)));
  g.plane_deviation = dev;
  return g;
}

// Signed volume contribution of one oriented face loop via the divergence
// theorem, triangulating the loop as a fan. Positive when the loop is
// oriented outward as seen from the enclosed region.
inline double signed_volume_contribution(const std::vector<Vec3>& loop) {
  double v = 0.0;
  for (std::size_t i = 1; i + 1 < loop.size(); ++i)
    v += dot(loop[0], cross(loop[i], loop[i + 1]));
  return v / 6.0;
}

// Volume centroid contribution matching signed_volume_contribution: each fan
// triangle forms a tetrahedron with the origin.
inline Vec3 volume_centroid_contribution(const std::vector<Vec3>& loop) {
  Vec3 c{0, 0, 0};
  for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
    double v = dot(loop[0], cross(loop[i], loop[i + 1])) / 6.0;
    c += (loop[0] + loop[i] + loop[i + 1]) * (v / 4.0);
  }
  return c;
}

} // namespace polyvem
