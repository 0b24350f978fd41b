#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/rng.hpp"
#include "polyvem/sampling.hpp"

namespace polyvem {

// Incremental Bowyer-Watson construction of the regular (weighted Delaunay)
// triangulation with true coordinates and tiny deterministic weights.
//
// Grids and lattices are maximally degenerate for plain Delaunay: whole
// subcubes are cospherical, and boundary quadruples are cocircular, so naive
// floating-point tie-breaking produces zero-volume cells. Generic weights
// resolve this cleanly: the cells of a regular triangulation are projections
// of non-vertical lower-hull facets of the lifted points, and such facets
// never project to coplanar quadruples, so no degenerate cell can appear.
// With weights of order 1e-10/t^2 the triangulation coincides with a
// Delaunay triangulation up to tie-breaking. Predicates run in long double,
// which keeps the weight signal three orders of magnitude above rounding
// noise at these scales.
//
// The hull is handled with symbolic infinite cells, one per hull facet;
// points landing exactly on the hull (cube faces) fall into the coplanar
// branch of the infinite-cell conflict test, which reduces to a 2D weighted
// in-circle decision on the wall.
class Delaunay3 {
public:
  static constexpr int kInfinite = -1;

  explicit Delaunay3(const std::vector<Vec3>& points, int t_scale) : points_(points) {
    const double delta = 1e-10 / std::max(1, t_scale * t_scale);
    weights_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      Rng h(0x5EEDF00DULL ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1)));
      weights_[i] = delta * (1.0 + h.uniform());
    }
  }

  // Runs the full insertion; returns finite tets as vertex index quadruples.
  // Cube corners are inserted first so the hull reaches its final shape
  // immediately; transient hulls with collinear facet rims (which grid
  // clouds in scan order would produce) never arise.
  std::vector<std::array<int, 4>> triangulate() {
    std::vector<int> order;
    order.reserve(points_.size());
    auto is_wall = [](double c) { return c == 0.0 || c == 1.0; };
    for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
      const Vec3& q = points_[i];
      if (is_wall(q.x) && is_wall(q.y) && is_wall(q.z)) order.push_back(i);
    }
    for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
      const Vec3& q = points_[i];
      if (!(is_wall(q.x) && is_wall(q.y) && is_wall(q.z))) order.push_back(i);
    }
    bootstrap();
    for (int i : order) {
      if (bootstrap_used_[i]) continue;
      insert(i);
    }
    std::vector<std::array<int, 4>> out;
    for (const Cell& c : cells_)
      if (c.alive && c.v[3] != kInfinite) out.push_back({c.v[0], c.v[1], c.v[2], c.v[3]});
    return out;
  }

private:
  struct Cell {
    std::array<int, 4> v;   // infinite cells keep kInfinite in slot 3
    std::array<int, 4> nbr; // neighbor opposite each vertex slot
    bool alive = true;
    std::uint32_t mark = 0;
  };

  // outward-facing vertex triples, opposite each slot
  static constexpr int kFace[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};

  using LD = long double;

  static LD orient(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    LD bx = static_cast<LD>(b.x) - a.x, by = static_cast<LD>(b.y) - a.y,
       bz = static_cast<LD>(b.z) - a.z;
    LD cx = static_cast<LD>(c.x) - a.x, cy = static_cast<LD>(c.y) - a.y,
       cz = static_cast<LD>(c.z) - a.z;
    LD dx = static_cast<LD>(d.x) - a.x, dy = static_cast<LD>(d.y) - a.y,
       dz = static_cast<LD>(d.z) - a.z;
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx);
  }

  // Weighted in-sphere (power) test: positive when point e lies strictly
  // inside the power sphere of the positively oriented weighted tet
  // (a,b,c,d). With zero weights this is the classical circumsphere test
  // (sign checked against the reference tet).
  LD power_test(int ia, int ib, int ic, int id, int ie) const {
    const Vec3 &a = points_[ia], &b = points_[ib], &c = points_[ic], &d = points_[id],
               &e = points_[ie];
    LD ax = static_cast<LD>(a.x) - e.x, ay = static_cast<LD>(a.y) - e.y,
       az = static_cast<LD>(a.z) - e.z;
    LD bx = static_cast<LD>(b.x) - e.x, by = static_cast<LD>(b.y) - e.y,
       bz = static_cast<LD>(b.z) - e.z;
    LD cx = static_cast<LD>(c.x) - e.x, cy = static_cast<LD>(c.y) - e.y,
       cz = static_cast<LD>(c.z) - e.z;
    LD dx = static_cast<LD>(d.x) - e.x, dy = static_cast<LD>(d.y) - e.y,
       dz = static_cast<LD>(d.z) - e.z;
    LD we = weights_[ie];
    LD a2 = ax * ax + ay * ay + az * az - weights_[ia] + we;
    LD b2 = bx * bx + by * by + bz * bz - weights_[ib] + we;
    LD c2 = cx * cx + cy * cy + cz * cz - weights_[ic] + we;
    LD d2 = dx * dx + dy * dy + dz * dz - weights_[id] + we;
    auto det3 = [](LD m00, LD m01, LD m02, LD m10, LD m11, LD m12, LD m20, LD m21, LD m22) {
      return m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) +
             m02 * (m10 * m21 - m11 * m20);
    };
    return a2 * det3(bx, by, bz, cx, cy, cz, dx, dy, dz) -
           b2 * det3(ax, ay, az, cx, cy, cz, dx, dy, dz) +
           c2 * det3(ax, ay, az, bx, by, bz, dx, dy, dz) -
           d2 * det3(ax, ay, az, bx, by, bz, cx, cy, cz);
  }

  // 2D weighted in-circle test within the plane of the triangle (a,b,c),
  // used when a new point lands exactly on a hull facet plane. The triangle
  // is passed in its outward winding; positive means p lies strictly inside
  // the power circle, i.e. the hull facet must be retriangulated with p.
  LD coplanar_power_test(int ia, int ib, int ic, int ip) const {
    const Vec3 &a = points_[ia], &b = points_[ib], &c = points_[ic], &p = points_[ip];
    Vec3 n = normalized(cross(b - a, c - a));
    int k = 0;
    double best = std::abs(n.x);
    if (std::abs(n.y) < best) { k = 1; best = std::abs(n.y); }
    if (std::abs(n.z) < best) { k = 2; }
    Vec3 e{0, 0, 0};
    e[k] = 1.0;
    Vec3 u = normalized(e - n * dot(n, e));
    Vec3 v = cross(n, u);
    // (u, v, n) right-handed and (a,b,c) counterclockwise around n
    auto row = [&](int idx, LD& X, LD& Y, LD& W) {
      const Vec3 q = points_[idx] - p;
      X = static_cast<LD>(dot(q, u));
      Y = static_cast<LD>(dot(q, v));
      W = static_cast<LD>(norm2(q)) - weights_[idx] + weights_[ip];
    };
    LD x1, y1, w1, x2, y2, w2, x3, y3, w3;
    row(ia, x1, y1, w1);
    row(ib, x2, y2, w2);
    row(ic, x3, y3, w3);
    return x1 * (y2 * w3 - y3 * w2) - y1 * (x2 * w3 - x3 * w2) + w1 * (x2 * y3 - x3 * y2);
  }

  const Vec3& pp(int i) const { return points_[i]; }

  bool conflicts(const Cell& cell, int p) const {
    if (cell.v[3] == kInfinite) {
      // hull facet stored outward: conflict when p sees it from strictly
      // outside, or lies in its plane inside the weighted circumcircle
      LD o = orient(pp(cell.v[0]), pp(cell.v[1]), pp(cell.v[2]), pp(p));
      if (o != 0) return o > 0;
      return coplanar_power_test(cell.v[0], cell.v[1], cell.v[2], p) > 0;
    }
    return power_test(cell.v[0], cell.v[1], cell.v[2], cell.v[3], p) > 0;
  }

  // Seed the structure with one well-shaped tetrahedron plus one infinite
  // cell per facet. The four seed points are chosen greedily for spread, so
  // grid-ordered clouds (whose leading points are collinear) bootstrap fine.
  void bootstrap() {
    const int n = static_cast<int>(points_.size());
    if (n < 4) throw DegenerateInput("need at least 4 points");
    bootstrap_used_.assign(points_.size(), false);

    int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
    double best = -1.0;
    for (int i = 1; i < n; ++i) {
      double d = norm2(pp(i) - pp(i0));
      if (d > best) {
        best = d;
        i1 = i;
      }
    }
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      if (i == i0 || i == i1) continue;
      double a = norm2(cross(pp(i) - pp(i0), pp(i1) - pp(i0)));
      if (a > best) {
        best = a;
        i2 = i;
      }
    }
    long double best_o = 0;
    for (int i = 0; i < n; ++i) {
      if (i == i0 || i == i1 || i == i2) continue;
      LD o = orient(pp(i0), pp(i1), pp(i2), pp(i));
      if (std::abs(static_cast<double>(o)) > std::abs(static_cast<double>(best_o))) {
        best_o = o;
        i3 = i;
      }
    }
    if (i3 < 0 || best_o == 0) throw DegenerateInput("all points coplanar");
    if (best_o < 0) std::swap(i1, i2);
    for (int i : {i0, i1, i2, i3}) bootstrap_used_[i] = true;

    cells_.push_back({{i0, i1, i2, i3}, {-1, -1, -1, -1}, true, 0});
    std::vector<int> fresh;
    for (int s = 0; s < 4; ++s) {
      Cell inf;
      inf.v = {cells_[0].v[kFace[s][0]], cells_[0].v[kFace[s][1]], cells_[0].v[kFace[s][2]],
               kInfinite};
      inf.nbr = {-1, -1, -1, 0};
      int id = static_cast<int>(cells_.size());
      cells_.push_back(inf);
      cells_[0].nbr[s] = id;
      fresh.push_back(id);
    }
    // infinite-infinite adjacency through the seed tet's edges
    std::map<std::array<int, 3>, std::pair<int, int>> open_inf;
    for (int id : fresh)
      for (int s = 0; s < 3; ++s) { // slots 0..2 are the facets containing kInfinite
        std::array<int, 3> k = {cells_[id].v[kFace[s][0]], cells_[id].v[kFace[s][1]],
                                cells_[id].v[kFace[s][2]]};
        std::sort(k.begin(), k.end()); // kInfinite sorts first
        auto it = open_inf.find(k);
        if (it == open_inf.end()) {
          open_inf[k] = {id, s};
        } else {
          cells_[id].nbr[s] = it->second.first;
          cells_[it->second.first].nbr[it->second.second] = id;
          open_inf.erase(it);
        }
      }
    if (!open_inf.empty()) throw DegenerateInput("hull bootstrap failed");
    last_finite_ = 0;
  }

  // Walk from the hint toward p through finite cells; returns a cell in
  // conflict with p.
  int locate(int p) {
    int current = last_finite_;
    if (!cells_[current].alive || cells_[current].v[3] == kInfinite) {
      current = -1;
      for (int i = static_cast<int>(cells_.size()) - 1; i >= 0; --i)
        if (cells_[i].alive && cells_[i].v[3] != kInfinite) {
          current = i;
          break;
        }
      if (current < 0) throw DegenerateInput("no finite cells during insertion");
    }
    const std::size_t cap = 4 * cells_.size() + 64;
    std::size_t steps = 0;
    while (true) {
      if (++steps > cap) break; // fall back to the exhaustive scan
      const Cell& c = cells_[current];
      bool moved = false;
      for (int s = 0; s < 4; ++s) {
        LD o = orient(pp(c.v[kFace[s][0]]), pp(c.v[kFace[s][1]]), pp(c.v[kFace[s][2]]), pp(p));
        if (o > 0) {
          int next = c.nbr[s];
          if (cells_[next].v[3] == kInfinite) return next; // p beyond this hull facet
          current = next;
          moved = true;
          break;
        }
      }
      if (!moved) return current; // inside this finite cell
    }
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
      if (cells_[i].alive && conflicts(cells_[i], p)) return i;
    throw DegenerateInput("point conflicts with no cell");
  }

  void insert(int p) {
    int seed = locate(p);
    if (!conflicts(cells_[seed], p)) {
      // walking landed exactly in a cell whose sphere does not contain the
      // point (possible only through the step cap); scan instead
      seed = -1;
      for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
        if (cells_[i].alive && conflicts(cells_[i], p)) {
          seed = i;
          break;
        }
      if (seed < 0) throw DegenerateInput("insertion found no conflict cavity");
    }

    // BFS the conflict region
    ++mark_;
    std::vector<int> cavity = {seed};
    cells_[seed].mark = mark_;
    for (std::size_t q = 0; q < cavity.size(); ++q) {
      const Cell c = cells_[cavity[q]];
      for (int s = 0; s < 4; ++s) {
        int nb = c.nbr[s];
        if (nb < 0 || cells_[nb].mark == mark_) continue;
        if (conflicts(cells_[nb], p)) {
          cells_[nb].mark = mark_;
          cavity.push_back(nb);
        }
      }
    }

    // boundary facets of the cavity, seen from inside the cavity
    struct BoundaryFace {
      std::array<int, 3> tri; // oriented toward the outside cell
      int outside;
      int outside_slot;
    };
    std::vector<BoundaryFace> boundary;
    for (int ci : cavity) {
      const Cell& c = cells_[ci];
      for (int s = 0; s < 4; ++s) {
        int nb = c.nbr[s];
        if (nb >= 0 && cells_[nb].mark == mark_) continue;
        // facet (kFace[s]) of c faces outward from c, i.e. toward the
        // non-conflict side
        BoundaryFace bf;
        bf.tri = {c.v[kFace[s][0]], c.v[kFace[s][1]], c.v[kFace[s][2]]};
        bf.outside = nb;
        bf.outside_slot = -1;
        if (nb >= 0) {
          for (int t = 0; t < 4; ++t)
            if (cells_[nb].nbr[t] == ci) bf.outside_slot = t;
        }
        boundary.push_back(bf);
      }
    }

    for (int ci : cavity) cells_[ci].alive = false;

    // one new cell per boundary facet
    std::map<std::array<int, 2>, std::pair<int, int>> ridge; // sorted edge -> (cell, slot)
    std::vector<int> fresh;
    fresh.reserve(boundary.size());
    for (const BoundaryFace& bf : boundary) {
      Cell nc;
      bool infinite_face = bf.tri[0] == kInfinite || bf.tri[1] == kInfinite ||
                           bf.tri[2] == kInfinite;
      if (infinite_face) {
        // Facet between two infinite cells: a hull rim edge plus infinity.
        // Rotating infinity to the back preserves the cyclic order, and the
        // conflict cell traversed the rim edge in its outward hull winding,
        // so (t0, t1, p) is the outward-wound replacement hull facet.
        std::array<int, 3> t = bf.tri;
        while (t[2] != kInfinite) {
          int tmp = t[0];
          t[0] = t[1];
          t[1] = t[2];
          t[2] = tmp;
        }
        nc.v = {t[0], t[1], p, kInfinite};
      } else {
        // new finite cell (tri, p); tri points away from the cavity, so the
        // flipped order is positively oriented
        nc.v = {bf.tri[0], bf.tri[2], bf.tri[1], p};
        LD o = orient(pp(nc.v[0]), pp(nc.v[1]), pp(nc.v[2]), pp(nc.v[3]));
        if (o == 0) throw DegenerateInput("regular triangulation produced a flat cell");
        if (o < 0) std::swap(nc.v[1], nc.v[2]);
      }
      nc.nbr = {-1, -1, -1, -1};
      int id = static_cast<int>(cells_.size());
      cells_.push_back(nc);
      fresh.push_back(id);
      // glue to the outside cell
      if (bf.outside >= 0) {
        // slot of the facet shared with outside: it is the one opposite p
        // for finite cells; find it generally
        const Cell& created = cells_[id];
        for (int s = 0; s < 4; ++s) {
          std::array<int, 3> k = {created.v[kFace[s][0]], created.v[kFace[s][1]],
                                  created.v[kFace[s][2]]};
          std::array<int, 3> want = bf.tri;
          std::sort(k.begin(), k.end());
          std::sort(want.begin(), want.end());
          if (k == want) {
            cells_[id].nbr[s] = bf.outside;
            if (bf.outside_slot >= 0) cells_[bf.outside].nbr[bf.outside_slot] = id;
            break;
          }
        }
      }
    }

    // glue new cells to each other across ridges (faces containing p or inf)
    for (int id : fresh) {
      const Cell& c = cells_[id];
      for (int s = 0; s < 4; ++s) {
        if (c.nbr[s] >= 0) continue;
        std::array<int, 3> tri = {c.v[kFace[s][0]], c.v[kFace[s][1]], c.v[kFace[s][2]]};
        std::sort(tri.begin(), tri.end());
        // drop p: the remaining pair identifies the ridge
        std::array<int, 2> key{};
        int w = 0;
        bool has_p = false;
        for (int vv : tri) {
          if (vv == p) {
            has_p = true;
            continue;
          }
          if (w < 2) key[w++] = vv;
        }
        if (!has_p || w != 2) continue;
        auto it = ridge.find(key);
        if (it == ridge.end()) {
          ridge[key] = {id, s};
        } else {
          cells_[id].nbr[s] = it->second.first;
          cells_[it->second.first].nbr[it->second.second] = id;
          ridge.erase(it);
        }
      }
    }
    if (!ridge.empty()) throw DegenerateInput("cavity stitching failed");

    for (int id : fresh)
      if (cells_[id].v[3] != kInfinite) {
        last_finite_ = id;
        break;
      }
  }

  const std::vector<Vec3>& points_;
  std::vector<double> weights_;
  std::vector<Cell> cells_;
  std::vector<bool> bootstrap_used_;
  int last_finite_ = 0;
  std::uint32_t mark_ = 0;
};

// Delaunay tetrahedral mesh of a point cloud covering the unit cube. All
// input points appear as vertices; no Steiner points are added.
inline PolyMesh delaunay_tet(const PointCloud& cloud) {
  const std::vector<Vec3>& pts = cloud.points;
  if (pts.size() < 4) throw DegenerateInput("need at least 4 points");

  Delaunay3 dt(pts, cloud.t);
  std::vector<std::array<int, 4>> tets = dt.triangulate();
  if (tets.empty()) throw DegenerateInput("all points coplanar");

  // shared triangular faces
  std::map<std::array<int, 3>, int> face_of;
  std::vector<std::vector<int>> faces;
  std::vector<std::vector<int>> cells;
  cells.reserve(tets.size());
  static constexpr int kTetFace[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  for (const auto& t : tets) {
    std::vector<int> cf;
    for (const auto& f : kTetFace) {
      std::array<int, 3> key = {t[f[0]], t[f[1]], t[f[2]]};
      std::sort(key.begin(), key.end());
      auto it = face_of.find(key);
      int fid;
      if (it == face_of.end()) {
        fid = static_cast<int>(faces.size());
        faces.push_back({t[f[0]], t[f[1]], t[f[2]]});
        face_of.emplace(key, fid);
      } else {
        fid = it->second;
      }
      cf.push_back(fid);
    }
    cells.push_back(std::move(cf));
  }

  MeshMetadata meta;
  meta.sampling_name = cloud.strategy;
  meta.meshing_name = "tet";
  meta.t = cloud.t;
  meta.rng_seed = cloud.seed;
  PolyMesh mesh = build_mesh(pts, faces, cells, meta);

  double total = 0.0;
  for (const PolyCell& c : mesh.cells) total += c.volume;
  if (std::abs(total - 1.0) > 1e-8)
    throw DegenerateInput("tetrahedra do not tile the cube (volume " + std::to_string(total) +
                          ")");
  return mesh;
}

} // namespace polyvem
