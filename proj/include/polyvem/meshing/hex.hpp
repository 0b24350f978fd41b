#pragma once

#include <map>
#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/sampling.hpp"

namespace polyvem {

// Hexahedral mesh over a tensor-product grid cloud. Plane-shift samplings
// keep all cell faces axis-aligned planes, so every face stays planar.
inline PolyMesh hex_mesh(const PointCloud& cloud) {
  if (!cloud.has_grid_topology())
    throw NotAGrid("strategy '" + cloud.strategy + "' does not generate grid planes");
  const int nx = static_cast<int>(cloud.grid_x.size());
  const int ny = static_cast<int>(cloud.grid_y.size());
  const int nz = static_cast<int>(cloud.grid_z.size());
  if (nx < 2 || ny < 2 || nz < 2) throw NotAGrid("grid needs at least 2 planes per axis");

  auto vid = [&](int i, int j, int k) { return (i * ny + j) * nz + k; };

  std::map<std::array<int, 4>, int> face_of;
  std::vector<std::vector<int>> faces;
  auto face_id = [&](std::array<int, 4> quad) {
    std::array<int, 4> key = quad;
    std::sort(key.begin(), key.end());
    auto it = face_of.find(key);
    if (it != face_of.end()) return it->second;
    int id = static_cast<int>(faces.size());
    faces.push_back({quad[0], quad[1], quad[2], quad[3]});
    face_of.emplace(key, id);
    return id;
  };

  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(nx - 1) * (ny - 1) * (nz - 1));
  for (int i = 0; i + 1 < nx; ++i)
    for (int j = 0; j + 1 < ny; ++j)
      for (int k = 0; k + 1 < nz; ++k) {
        int v000 = vid(i, j, k), v100 = vid(i + 1, j, k), v010 = vid(i, j + 1, k),
            v110 = vid(i + 1, j + 1, k), v001 = vid(i, j, k + 1), v101 = vid(i + 1, j, k + 1),
            v011 = vid(i, j + 1, k + 1), v111 = vid(i + 1, j + 1, k + 1);
        cells.push_back({face_id({v000, v010, v110, v100}),   // bottom
                         face_id({v001, v101, v111, v011}),   // top
                         face_id({v000, v100, v101, v001}),   // y-
                         face_id({v010, v011, v111, v110}),   // y+
                         face_id({v000, v001, v011, v010}),   // x-
                         face_id({v100, v110, v111, v101})}); // x+
      }

  MeshMetadata meta;
  meta.sampling_name = cloud.strategy;
  meta.meshing_name = "hex";
  meta.t = cloud.t;
  meta.rng_seed = cloud.seed;
  PolyMesh mesh = build_mesh(cloud.points, faces, cells, meta);

  double total = 0.0;
  for (const PolyCell& c : mesh.cells) total += c.volume;
  if (std::abs(total - 1.0) > 1e-8)
    throw DegenerateInput("hexahedra do not tile the cube");
  return mesh;
}

} // namespace polyvem
