#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/rng.hpp"
#include "polyvem/vec3.hpp"

namespace polyvem {

enum class PointTag { Interior, Face, Edge, Corner };

inline const char* tag_name(PointTag t) {
  switch (t) {
    case PointTag::Interior: return "interior";
    case PointTag::Face: return "face";
    case PointTag::Edge: return "edge";
    default: return "corner";
  }
}

// Point cloud in the closed unit cube. Grid-based strategies additionally
// expose their plane coordinates (grid_x/y/z) so the hex mesher can rebuild
// the tensor-product structure; those clouds enumerate points with x
// outermost, so the index order is lexicographic in (x, y, z).
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<PointTag> tags;
  std::string strategy;
  int t = 1;
  std::uint64_t seed = 0;
  std::vector<double> grid_x, grid_y, grid_z; // empty unless grid topology

  bool has_grid_topology() const { return !grid_x.empty(); }
};

namespace sampling_detail {

inline PointTag classify(const Vec3& p) {
  auto at_wall = [](double c) { return c == 0.0 || c == 1.0; };
  int walls = (at_wall(p.x) ? 1 : 0) + (at_wall(p.y) ? 1 : 0) + (at_wall(p.z) ? 1 : 0);
  if (walls == 3) return PointTag::Corner;
  if (walls == 2) return PointTag::Edge;
  if (walls == 1) return PointTag::Face;
  return PointTag::Interior;
}

inline PointCloud from_grid(std::vector<double> xs, std::vector<double> ys,
                            std::vector<double> zs, std::string strategy, int t,
                            std::uint64_t seed) {
  PointCloud cloud;
  cloud.strategy = std::move(strategy);
  cloud.t = t;
  cloud.seed = seed;
  cloud.points.reserve(xs.size() * ys.size() * zs.size());
  for (double x : xs)
    for (double y : ys)
      for (double z : zs) {
        cloud.points.push_back({x, y, z});
        cloud.tags.push_back(classify(cloud.points.back()));
      }
  cloud.grid_x = std::move(xs);
  cloud.grid_y = std::move(ys);
  cloud.grid_z = std::move(zs);
  return cloud;
}

inline std::vector<double> equispaced(int t) {
  std::vector<double> xs(t + 1);
  for (int i = 0; i <= t; ++i) xs[i] = static_cast<double>(i) / t;
  xs.back() = 1.0;
  return xs;
}

// Bridson dart throwing with minimum distance r inside an axis box; dim is 2
// or 3 (unused coordinates are pinned to lo). A zero-extent box yields the
// single point lo.
template <int Dim>
std::vector<std::array<double, Dim>> bridson(std::array<double, Dim> lo,
                                             std::array<double, Dim> hi, double r, Rng rng) {
  std::vector<std::array<double, Dim>> result;
  bool degenerate = true;
  for (int d = 0; d < Dim; ++d)
    if (hi[d] - lo[d] > 1e-12) degenerate = false;
  if (degenerate) {
    result.push_back(lo);
    return result;
  }

  const double cell = r / std::sqrt(static_cast<double>(Dim));
  std::array<int, Dim> dims;
  for (int d = 0; d < Dim; ++d)
    dims[d] = std::max(1, static_cast<int>(std::ceil((hi[d] - lo[d]) / cell)));
  std::size_t total = 1;
  for (int d = 0; d < Dim; ++d) total *= dims[d];
  std::vector<int> grid(total, -1);

  auto cell_index = [&](const std::array<double, Dim>& p) {
    std::size_t idx = 0;
    for (int d = 0; d < Dim; ++d) {
      int c = static_cast<int>((p[d] - lo[d]) / cell);
      c = std::min(std::max(c, 0), dims[d] - 1);
      idx = idx * dims[d] + c;
    }
    return idx;
  };
  auto dist2 = [](const std::array<double, Dim>& a, const std::array<double, Dim>& b) {
    double s = 0.0;
    for (int d = 0; d < Dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
  };
  auto conflicts = [&](const std::array<double, Dim>& p) {
    std::array<int, Dim> c;
    for (int d = 0; d < Dim; ++d) {
      c[d] = static_cast<int>((p[d] - lo[d]) / cell);
      c[d] = std::min(std::max(c[d], 0), dims[d] - 1);
    }
    std::array<int, Dim> it;
    std::function<bool(int)> walk = [&](int d) -> bool {
      if (d == Dim) {
        std::size_t idx = 0;
        for (int e = 0; e < Dim; ++e) idx = idx * dims[e] + it[e];
        int who = grid[idx];
        return who >= 0 && dist2(result[who], p) < r * r;
      }
      for (int o = -2; o <= 2; ++o) {
        it[d] = c[d] + o;
        if (it[d] < 0 || it[d] >= dims[d]) continue;
        if (walk(d + 1)) return true;
      }
      return false;
    };
    return walk(0);
  };
  auto insert = [&](const std::array<double, Dim>& p) {
    grid[cell_index(p)] = static_cast<int>(result.size());
    result.push_back(p);
  };

  std::array<double, Dim> first;
  for (int d = 0; d < Dim; ++d) first[d] = rng.uniform(lo[d], hi[d]);
  insert(first);
  std::vector<int> active = {0};

  const int kAttempts = 30;
  while (!active.empty()) {
    std::size_t pick = static_cast<std::size_t>(rng.below(active.size()));
    const std::array<double, Dim> base = result[active[pick]];
    bool placed = false;
    for (int a = 0; a < kAttempts; ++a) {
      // random direction, radius in [r, 2r]
      std::array<double, Dim> dir;
      double n2 = 0.0;
      do {
        n2 = 0.0;
        for (int d = 0; d < Dim; ++d) {
          dir[d] = rng.uniform(-1.0, 1.0);
          n2 += dir[d] * dir[d];
        }
      } while (n2 > 1.0 || n2 < 1e-12);
      double radius = r * (1.0 + rng.uniform());
      double scale = radius / std::sqrt(n2);
      std::array<double, Dim> cand;
      bool in_box = true;
      for (int d = 0; d < Dim; ++d) {
        cand[d] = base[d] + dir[d] * scale;
        if (cand[d] < lo[d] || cand[d] > hi[d]) in_box = false;
      }
      if (!in_box || conflicts(cand)) continue;
      insert(cand);
      active.push_back(static_cast<int>(result.size()) - 1);
      placed = true;
      break;
    }
    if (!placed) {
      active[pick] = active.back();
      active.pop_back();
    }
  }
  return result;
}

} // namespace sampling_detail

// Equispaced grid of spacing 1/t: (t+1)^3 points.
inline PointCloud sample_uniform(int t) {
  if (t < 1) throw SamplingFailed("uniform sampling requires t >= 1");
  auto xs = sampling_detail::equispaced(t);
  return sampling_detail::from_grid(xs, xs, xs, "uniform", t, 0);
}

// Grid with spacing 1/t in x and y; z gaps grow linearly (1/t, 2/t, ...)
// until the next step would overshoot, in which case the last plane snaps
// to 1.
inline PointCloud sample_anisotropic(int t) {
  if (t < 2) throw SamplingFailed("anisotropic sampling requires t >= 2");
  auto xs = sampling_detail::equispaced(t);
  std::vector<double> zs = {0.0};
  double z = 0.0;
  for (int k = 1;; ++k) {
    double next = z + static_cast<double>(k) / t;
    if (next >= 1.0 - 1e-12) {
      zs.push_back(1.0);
      break;
    }
    zs.push_back(next);
    z = next;
  }
  return sampling_detail::from_grid(xs, xs, zs, "anisotropic", t, 0);
}

// Uniform grid whose interior planes are displaced along their own axis by a
// bounded random offset; boundary planes stay fixed and the plane order
// stays strictly monotone (|offset| <= 0.48/t).
inline PointCloud sample_parallel(int t, std::uint64_t seed) {
  if (t < 2) throw SamplingFailed("parallel sampling requires t >= 2");
  Rng rng(seed);
  const double bound = 0.48 / t;
  auto displaced = [&](Rng axis_rng) {
    std::vector<double> xs = sampling_detail::equispaced(t);
    for (int i = 1; i < t; ++i) xs[i] += axis_rng.uniform(-bound, bound);
    return xs;
  };
  auto xs = displaced(rng.fork("x"));
  auto ys = displaced(rng.fork("y"));
  auto zs = displaced(rng.fork("z"));
  PointCloud cloud = sampling_detail::from_grid(xs, ys, zs, "parallel", t, seed);
  return cloud;
}

// Body centered lattice: uniform grid plus the center of every grid cell.
inline PointCloud sample_bcl(int t) {
  if (t < 1) throw SamplingFailed("bcl sampling requires t >= 1");
  PointCloud cloud;
  cloud.strategy = "bcl";
  cloud.t = t;
  auto xs = sampling_detail::equispaced(t);
  for (double x : xs)
    for (double y : xs)
      for (double z : xs) {
        cloud.points.push_back({x, y, z});
        cloud.tags.push_back(sampling_detail::classify(cloud.points.back()));
      }
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j)
      for (int k = 0; k < t; ++k) {
        cloud.points.push_back({(i + 0.5) / t, (j + 0.5) / t, (k + 0.5) / t});
        cloud.tags.push_back(PointTag::Interior);
      }
  return cloud;
}

// Poisson disk sampling with radius 1/t: Bridson darts in the shrunken cube
// (1/t, 1-1/t)^3 and on every boundary face in (1/t, 1-1/t)^2, plus an
// equispaced 1/t sampling of the twelve edges and the corners.
inline PointCloud sample_poisson(int t, std::uint64_t seed) {
  if (t < 2) throw SamplingFailed("poisson sampling requires t >= 2");
  Rng rng(seed);
  PointCloud cloud;
  cloud.strategy = "poisson";
  cloud.t = t;
  cloud.seed = seed;
  const double r = 1.0 / t;
  const double lo = r, hi = 1.0 - r;

  for (double x : {0.0, 1.0})
    for (double y : {0.0, 1.0})
      for (double z : {0.0, 1.0}) {
        cloud.points.push_back({x, y, z});
        cloud.tags.push_back(PointTag::Corner);
      }

  // 12 edges: interior points at spacing 1/t
  auto edge_points = [&](Vec3 a, Vec3 b) {
    for (int i = 1; i < t; ++i) {
      double s = static_cast<double>(i) / t;
      cloud.points.push_back(a + (b - a) * s);
      cloud.tags.push_back(PointTag::Edge);
    }
  };
  for (double y : {0.0, 1.0})
    for (double z : {0.0, 1.0}) edge_points({0, y, z}, {1, y, z});
  for (double x : {0.0, 1.0})
    for (double z : {0.0, 1.0}) edge_points({x, 0, z}, {x, 1, z});
  for (double x : {0.0, 1.0})
    for (double y : {0.0, 1.0}) edge_points({x, y, 0}, {x, y, 1});

  // 6 faces
  struct FaceMap {
    const char* label;
    Vec3 origin, du, dv;
  };
  const FaceMap face_maps[6] = {
      {"face_x0", {0, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {"face_x1", {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
      {"face_y0", {0, 0, 0}, {1, 0, 0}, {0, 0, 1}}, {"face_y1", {0, 1, 0}, {1, 0, 0}, {0, 0, 1}},
      {"face_z0", {0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {"face_z1", {0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
  };
  for (const FaceMap& fm : face_maps) {
    auto pts = sampling_detail::bridson<2>({lo, lo}, {hi, hi}, r, rng.fork(fm.label));
    for (const auto& p : pts) {
      cloud.points.push_back(fm.origin + fm.du * p[0] + fm.dv * p[1]);
      cloud.tags.push_back(PointTag::Face);
    }
  }

  // interior
  auto pts = sampling_detail::bridson<3>({lo, lo, lo}, {hi, hi, hi}, r, rng.fork("interior"));
  if (pts.empty()) throw SamplingFailed("no interior points placed");
  for (const auto& p : pts) {
    cloud.points.push_back({p[0], p[1], p[2]});
    cloud.tags.push_back(PointTag::Interior);
  }
  return cloud;
}

// Random sampling: the corners, t i.i.d. points per edge, t^2 per face and
// t^3 in the interior.
inline PointCloud sample_random(int t, std::uint64_t seed) {
  if (t < 1) throw SamplingFailed("random sampling requires t >= 1");
  Rng rng(seed);
  PointCloud cloud;
  cloud.strategy = "random";
  cloud.t = t;
  cloud.seed = seed;

  for (double x : {0.0, 1.0})
    for (double y : {0.0, 1.0})
      for (double z : {0.0, 1.0}) {
        cloud.points.push_back({x, y, z});
        cloud.tags.push_back(PointTag::Corner);
      }

  Rng edge_rng = rng.fork("edges");
  auto edge_points = [&](Vec3 a, Vec3 b) {
    for (int i = 0; i < t; ++i) {
      cloud.points.push_back(a + (b - a) * edge_rng.uniform());
      cloud.tags.push_back(PointTag::Edge);
    }
  };
  for (double y : {0.0, 1.0})
    for (double z : {0.0, 1.0}) edge_points({0, y, z}, {1, y, z});
  for (double x : {0.0, 1.0})
    for (double z : {0.0, 1.0}) edge_points({x, 0, z}, {x, 1, z});
  for (double x : {0.0, 1.0})
    for (double y : {0.0, 1.0}) edge_points({x, y, 0}, {x, y, 1});

  Rng face_rng = rng.fork("faces");
  struct FaceMap {
    Vec3 origin, du, dv;
  };
  const FaceMap face_maps[6] = {
      {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
      {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}}, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},
      {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
  };
  for (const FaceMap& fm : face_maps)
    for (int i = 0; i < t * t; ++i) {
      cloud.points.push_back(fm.origin + fm.du * face_rng.uniform() + fm.dv * face_rng.uniform());
      cloud.tags.push_back(PointTag::Face);
    }

  Rng vol_rng = rng.fork("interior");
  for (int i = 0; i < t * t * t; ++i) {
    cloud.points.push_back({vol_rng.uniform(), vol_rng.uniform(), vol_rng.uniform()});
    cloud.tags.push_back(PointTag::Interior);
  }
  return cloud;
}

inline PointCloud sample(const std::string& strategy, int t, std::uint64_t seed) {
  if (strategy == "uniform") return sample_uniform(t);
  if (strategy == "anisotropic") return sample_anisotropic(t);
  if (strategy == "parallel") return sample_parallel(t, seed);
  if (strategy == "bcl") return sample_bcl(t);
  if (strategy == "poisson") return sample_poisson(t, seed);
  if (strategy == "random") return sample_random(t, seed);
  throw SamplingFailed("unknown strategy '" + strategy + "'");
}

inline void write_cloud(const PointCloud& cloud, std::ostream& out) {
  char buf[128];
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3& p = cloud.points[i];
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %s\n", p.x, p.y, p.z,
                  tag_name(cloud.tags[i]));
    out << buf;
  }
}

} // namespace polyvem
