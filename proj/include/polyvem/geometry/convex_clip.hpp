#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "polyvem/geometry/measures.hpp"
#include "polyvem/vec3.hpp"

namespace polyvem {

// Half-space { x : dot(n, x) <= offset }. n need not be unit length, but all
// construction sites normalize it so the clipping tolerance is a distance.
struct Plane {
  Vec3 n;
  double offset = 0.0;
  double signed_distance(const Vec3& p) const { return dot(n, p) - offset; }
};

inline Plane plane_through(const Vec3& point, const Vec3& unit_normal) {
  return {unit_normal, dot(unit_normal, point)};
}

// Vertices closer than this to a clip plane count as lying on it, and output
// vertices are deduplicated on a lattice of the same pitch.
inline constexpr double kClipEps = 1e-12;

namespace detail {
struct SnapKey {
  std::int64_t a, b, c;
  bool operator<(const SnapKey& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
};
inline SnapKey snap_key(const Vec3& p, double pitch) {
  return {static_cast<std::int64_t>(std::llround(p.x / pitch)),
          static_cast<std::int64_t>(std::llround(p.y / pitch)),
          static_cast<std::int64_t>(std::llround(p.z / pitch))};
}
} // namespace detail

// Convex polyhedron as a vertex list plus outward-oriented face loops. Each
// face remembers the id of the plane that cut it (Voronoi neighbors, cell
// faces, ...); untagged faces carry -1.
class ConvexPolyhedron {
public:
  struct Face {
    std::vector<int> loop;
    int source = -1;
  };

  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  bool empty() const { return vertices.empty(); }

  static ConvexPolyhedron axis_box(const Vec3& lo, const Vec3& hi) {
    ConvexPolyhedron box;
    box.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
                    {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
    box.faces = {{{0, 3, 2, 1}, -1}, {{4, 5, 6, 7}, -1}, {{0, 1, 5, 4}, -1},
                 {{1, 2, 6, 5}, -1}, {{2, 3, 7, 6}, -1}, {{3, 0, 4, 7}, -1}};
    return box;
  }

  double volume() const {
    double v = 0.0;
    std::vector<Vec3> loop;
    for (const Face& f : faces) {
      loop.clear();
      for (int id : f.loop) loop.push_back(vertices[id]);
      v += signed_volume_contribution(loop);
    }
    return v;
  }

  Vec3 centroid() const {
    double v = 0.0;
    Vec3 c{0, 0, 0};
    std::vector<Vec3> loop;
    for (const Face& f : faces) {
      loop.clear();
      for (int id : f.loop) loop.push_back(vertices[id]);
      v += signed_volume_contribution(loop);
      c += volume_centroid_contribution(loop);
    }
    return v != 0.0 ? c / v : c;
  }

  // Intersect with a half-space. The cut cross-section of a convex body is
  // convex, so the cap face is rebuilt as the planar convex hull of all cut
  // points; this avoids tracking edge chains through degenerate contacts.
  ConvexPolyhedron clip(const Plane& plane, int cap_source = -1) const {
    if (empty()) return {};
    std::vector<double> sd(vertices.size());
    double sd_min = 1e300, sd_max = -1e300;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      sd[i] = plane.signed_distance(vertices[i]);
      sd_min = std::min(sd_min, sd[i]);
      sd_max = std::max(sd_max, sd[i]);
    }
    if (sd_max <= kClipEps) return *this; // nothing removed
    if (sd_min >= -kClipEps) return {};   // nothing left

    ConvexPolyhedron out;
    std::map<detail::SnapKey, int> index_of;
    auto emit = [&](const Vec3& p) {
      auto key = detail::snap_key(p, kClipEps);
      auto it = index_of.find(key);
      if (it != index_of.end()) return it->second;
      int id = static_cast<int>(out.vertices.size());
      out.vertices.push_back(p);
      index_of.emplace(key, id);
      return id;
    };

    std::vector<Vec3> cut_points;
    std::vector<int> new_loop;
    for (const Face& f : faces) {
      new_loop.clear();
      std::size_t k = f.loop.size();
      for (std::size_t i = 0; i < k; ++i) {
        int a = f.loop[i];
        int b = f.loop[(i + 1) % k];
        bool a_in = sd[a] <= kClipEps;
        if (a_in) {
          int id = emit(vertices[a]);
          if (new_loop.empty() || new_loop.back() != id) new_loop.push_back(id);
          if (std::abs(sd[a]) <= kClipEps) cut_points.push_back(vertices[a]);
        }
        bool strict_cross = (sd[a] < -kClipEps && sd[b] > kClipEps) ||
                            (sd[a] > kClipEps && sd[b] < -kClipEps);
        if (strict_cross) {
          double t = sd[a] / (sd[a] - sd[b]);
          Vec3 p = vertices[a] + (vertices[b] - vertices[a]) * t;
          int id = emit(p);
          if (new_loop.empty() || new_loop.back() != id) new_loop.push_back(id);
          cut_points.push_back(p);
        }
      }
      while (new_loop.size() >= 2 && new_loop.front() == new_loop.back()) new_loop.pop_back();
      if (new_loop.size() >= 3) out.faces.push_back({new_loop, f.source});
    }

    // Cap face: convex hull of the cut points in the plane's own frame.
    if (cut_points.size() >= 3) {
      Vec3 n = normalized(plane.n);
      int k = 0;
      double best = std::abs(n.x);
      if (std::abs(n.y) < best) { k = 1; best = std::abs(n.y); }
      if (std::abs(n.z) < best) { k = 2; }
      Vec3 e{0, 0, 0};
      e[k] = 1.0;
      Vec3 u = normalized(e - n * dot(n, e));
      Vec3 v = cross(n, u);

      std::vector<std::pair<Vec2, Vec3>> pts;
      pts.reserve(cut_points.size());
      for (const Vec3& p : cut_points) pts.push_back({{dot(p, u), dot(p, v)}, p});
      std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) {
        return l.first.x != r.first.x ? l.first.x < r.first.x : l.first.y < r.first.y;
      });
      pts.erase(std::unique(pts.begin(), pts.end(),
                            [](const auto& l, const auto& r) {
                              return dist(l.first, r.first) <= kClipEps;
                            }),
                pts.end());

      if (pts.size() >= 3) {
        // Andrew monotone chain; collinear points dropped.
        auto turn = [](const Vec2& o, const Vec2& a, const Vec2& b) {
          return cross2(a - o, b - o);
        };
        std::vector<int> hull;
        for (int pass = 0; pass < 2; ++pass) {
          std::size_t start = hull.size();
          for (std::size_t i = 0; i < pts.size(); ++i) {
            std::size_t j = pass == 0 ? i : pts.size() - 1 - i;
            while (hull.size() >= start + 2 &&
                   turn(pts[hull[hull.size() - 2]].first, pts[hull.back()].first,
                        pts[j].first) <= 0)
              hull.pop_back();
            hull.push_back(static_cast<int>(j));
          }
          hull.pop_back();
        }
        if (hull.size() >= 3) {
          // CCW around n means the cap's outward normal is +n (the removed side).
          std::vector<int> cap;
          cap.reserve(hull.size());
          for (int idx : hull) cap.push_back(emit(pts[idx].second));
          cap.erase(std::unique(cap.begin(), cap.end()), cap.end());
          while (cap.size() >= 2 && cap.front() == cap.back()) cap.pop_back();
          if (cap.size() >= 3) out.faces.push_back({cap, cap_source});
        }
      }
    }

    if (out.faces.size() < 4 || out.volume() <= kGeomEps) return {};
    return out;
  }
};

// Convex polygon in a 2D frame, counterclockwise. An empty point list is the
// empty polygon (used for empty kernels).
struct ConvexPolygon2 {
  std::vector<Vec2> points;

  bool empty() const { return points.empty(); }

  double area() const {
    if (points.size() < 3) return 0.0;
    return polygon_area2(points);
  }

  // Intersect with the half-plane { p : cross2(dir, p - base) >= 0 }, i.e.
  // keep everything to the left of the directed line (base, base + dir).
  ConvexPolygon2 clip_left_of(const Vec2& base, const Vec2& dir) const {
    if (points.size() < 3) return {};
    auto side = [&](const Vec2& p) { return cross2(dir, p - base); };
    std::vector<Vec2> out;
    std::size_t k = points.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Vec2& a = points[i];
      const Vec2& b = points[(i + 1) % k];
      double sa = side(a), sb = side(b);
      if (sa >= -kClipEps) out.push_back(a);
      if ((sa > kClipEps && sb < -kClipEps) || (sa < -kClipEps && sb > kClipEps)) {
        double t = sa / (sa - sb);
        out.push_back(a + (b - a) * t);
      }
    }
    // collapse snapped duplicates
    std::vector<Vec2> clean;
    for (const Vec2& p : out) {
      if (clean.empty() || dist(clean.back(), p) > kClipEps) clean.push_back(p);
    }
    while (clean.size() >= 2 && dist(clean.front(), clean.back()) <= kClipEps) clean.pop_back();
    if (clean.size() < 3) return {};
    ConvexPolygon2 poly{std::move(clean)};
    return poly.area() > kGeomEps ? poly : ConvexPolygon2{};
  }
};

} // namespace polyvem
