#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/geometry/convex_clip.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/sampling.hpp"

namespace polyvem {

namespace voronoi_detail {

// Tolerant global vertex pool: keys snapped to a 1e-9 lattice, with the 27
// neighboring lattice cells probed so straddling duplicates still merge.
class VertexPool {
public:
  int intern(const Vec3& p) {
    const double pitch = 1e-9;
    auto key = detail::snap_key(p, pitch);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = map_.find({key.a + dx, key.b + dy, key.c + dz});
          if (it != map_.end() && dist(points_[it->second], p) <= pitch) return it->second;
        }
    int id = static_cast<int>(points_.size());
    points_.push_back(p);
    map_.emplace(key, id);
    return id;
  }

  const std::vector<Vec3>& points() const { return points_; }

private:
  std::map<detail::SnapKey, int> map_;
  std::vector<Vec3> points_;
};

} // namespace voronoi_detail

// Voronoi diagram of the cloud's points restricted to the unit cube, built
// by clipping the cube with bisector half-spaces per generator. Candidates
// are visited nearest-first and clipping stops once the next generator is
// farther than twice the current max vertex distance, which cannot cut the
// cell anymore. Generators do not appear as mesh vertices.
inline PolyMesh voronoi_mesh(const PointCloud& cloud) {
  const std::vector<Vec3>& gen = cloud.points;
  const int n = static_cast<int>(gen.size());
  if (n < 2) throw DegenerateInput("voronoi needs at least 2 generators");

  // initial box with wall tags -1..-6
  ConvexPolyhedron box = ConvexPolyhedron::axis_box({0, 0, 0}, {1, 1, 1});
  for (std::size_t f = 0; f < box.faces.size(); ++f)
    box.faces[f].source = -static_cast<int>(f) - 1;

  std::vector<ConvexPolyhedron> cells(n);
  std::vector<std::pair<double, int>> byDist(n - 1);
  for (int i = 0; i < n; ++i) {
    ConvexPolyhedron cell = box;
    int k = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) byDist[k++] = {norm2(gen[j] - gen[i]), j};
    std::sort(byDist.begin(), byDist.end());

    for (const auto& [d2, j] : byDist) {
      double max_r2 = 0.0;
      for (const Vec3& v : cell.vertices) max_r2 = std::max(max_r2, norm2(v - gen[i]));
      if (d2 > 4.0 * max_r2) break; // bisector cannot reach the cell
      Vec3 mid = (gen[i] + gen[j]) * 0.5;
      Vec3 nrm = normalized(gen[j] - gen[i]);
      cell = cell.clip(plane_through(mid, nrm), j);
      if (cell.empty()) throw ClippingDegenerate(i);
    }
    cells[i] = std::move(cell);
  }

  // assemble a conforming mesh: vertices merged through the pool, interior
  // faces identified by their unordered generator pair
  voronoi_detail::VertexPool pool;
  std::vector<std::vector<int>> face_loops;
  std::vector<std::vector<int>> cell_faces(n);
  std::map<std::pair<int, int>, int> pair_face;
  std::map<std::pair<int, int>, std::vector<int>> pair_set;

  for (int i = 0; i < n; ++i) {
    for (const auto& face : cells[i].faces) {
      std::vector<int> loop;
      loop.reserve(face.loop.size());
      for (int lv : face.loop) {
        int gv = pool.intern(cells[i].vertices[lv]);
        if (loop.empty() || loop.back() != gv) loop.push_back(gv);
      }
      while (loop.size() >= 2 && loop.front() == loop.back()) loop.pop_back();
      if (loop.size() < 3) throw ClippingDegenerate(i);

      if (face.source < 0) {
        // cube wall face, owned by this cell alone
        cell_faces[i].push_back(static_cast<int>(face_loops.size()));
        face_loops.push_back(std::move(loop));
        continue;
      }
      int j = face.source;
      auto key = std::minmax(i, j);
      std::vector<int> sorted = loop;
      std::sort(sorted.begin(), sorted.end());
      auto it = pair_face.find({key.first, key.second});
      if (it == pair_face.end()) {
        pair_face[{key.first, key.second}] = static_cast<int>(face_loops.size());
        pair_set[{key.first, key.second}] = sorted;
        cell_faces[i].push_back(static_cast<int>(face_loops.size()));
        face_loops.push_back(std::move(loop));
      } else {
        if (pair_set[{key.first, key.second}] != sorted)
          throw ClippingDegenerate(i); // the two clipped sides disagree
        cell_faces[i].push_back(it->second);
      }
    }
  }
  for (const auto& [key, fid] : pair_face) {
    (void)fid;
    // every bisector face must have been produced by both of its cells
    bool seen_first = false, seen_second = false;
    for (int f : cell_faces[key.first])
      if (f == pair_face[{key.first, key.second}]) seen_first = true;
    for (int f : cell_faces[key.second])
      if (f == pair_face[{key.first, key.second}]) seen_second = true;
    if (!seen_first || !seen_second) throw ClippingDegenerate(key.first);
  }

  MeshMetadata meta;
  meta.sampling_name = cloud.strategy;
  meta.meshing_name = "voro";
  meta.t = cloud.t;
  meta.rng_seed = cloud.seed;
  PolyMesh mesh = build_mesh(pool.points(), face_loops, cell_faces, meta);

  double total = 0.0;
  for (const PolyCell& c : mesh.cells) total += c.volume;
  if (std::abs(total - 1.0) > 1e-8)
    throw DegenerateInput("voronoi cells do not tile the cube (volume " + std::to_string(total) +
                          ")");
  return mesh;
}

} // namespace polyvem
