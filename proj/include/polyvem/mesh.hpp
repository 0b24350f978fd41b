#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/geometry/measures.hpp"
#include "polyvem/vec3.hpp"

namespace polyvem {

// A planar polygonal face shared between at most two cells. The vertex loop
// is counterclockwise with respect to the stored normal; cells flip it via an
// orientation sign when their outward direction disagrees.
struct PolyFace {
  std::vector<int> vertex_loop;
  double area = 0.0;
  double diameter = 0.0;
  Vec3 centroid;
  Vec3 normal;
  Vec3 axis_u, axis_v;          // orthonormal in-plane frame
  std::vector<Vec2> frame_loop; // loop in the frame, centered at the centroid
  bool boundary = false;
};

struct PolyCell {
  std::vector<int> face_ids;
  std::vector<std::int8_t> face_signs; // +1: stored normal is outward, -1: flipped
  std::vector<int> vertex_ids;         // unique, ascending
  double volume = 0.0;
  double diameter = 0.0;
  Vec3 barycenter; // volume centroid
};

struct MeshMetadata {
  std::string sampling_name;
  std::string meshing_name;
  int t = 1;
  std::uint64_t rng_seed = 0;
  int level = 0;
};

struct PolyMesh {
  std::vector<Vec3> vertices;
  std::vector<PolyFace> faces;
  std::vector<PolyCell> cells;
  std::vector<std::uint8_t> boundary_vertex;
  std::vector<std::array<int, 2>> face_cells; // incident cells, -1 when absent
  std::vector<std::array<int, 2>> edges;      // unique undirected edges, sorted pairs
  double h = 0.0;                             // max cell diameter
  MeshMetadata meta;

  const Vec3& point(int v) const { return vertices[static_cast<std::size_t>(v)]; }

  Vec3 outward_normal(const PolyCell& cell, std::size_t local_face) const {
    const PolyFace& f = faces[cell.face_ids[local_face]];
    return f.normal * static_cast<double>(cell.face_signs[local_face]);
  }

  std::vector<Vec3> face_points(int face_id) const {
    const PolyFace& f = faces[face_id];
    std::vector<Vec3> pts;
    pts.reserve(f.vertex_loop.size());
    for (int v : f.vertex_loop) pts.push_back(point(v));
    return pts;
  }

  // Face loop as seen from a given cell, i.e. counterclockwise from outside.
  std::vector<int> oriented_face_loop(const PolyCell& cell, std::size_t local_face) const {
    const PolyFace& f = faces[cell.face_ids[local_face]];
    std::vector<int> loop = f.vertex_loop;
    if (cell.face_signs[local_face] < 0) std::reverse(loop.begin(), loop.end());
    return loop;
  }
};

inline double mesh_size(const PolyMesh& mesh) { return mesh.h; }

namespace detail {

// Resolve per-cell face orientation signs so every face normal points
// outward: adjacent faces must traverse their shared edge in opposite
// directions, and the global sign is fixed by requiring positive volume.
inline std::vector<std::int8_t> resolve_cell_orientation(const PolyMesh& mesh,
                                                         const std::vector<int>& face_ids,
                                                         std::size_t cell_id) {
  struct Occurrence {
    int local_face;
    int direction; // +1 if traversed (a,b) with a<b
  };
  std::map<std::pair<int, int>, std::vector<Occurrence>> edge_faces;
  for (std::size_t lf = 0; lf < face_ids.size(); ++lf) {
    const auto& loop = mesh.faces[face_ids[lf]].vertex_loop;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i];
      int b = loop[(i + 1) % loop.size()];
      auto key = std::minmax(a, b);
      edge_faces[{key.first, key.second}].push_back(
          {static_cast<int>(lf), a < b ? +1 : -1});
    }
  }
  for (const auto& [edge, occ] : edge_faces)
    if (occ.size() != 2) throw OpenCellBoundary(cell_id);

  std::vector<std::int8_t> sign(face_ids.size(), 0);
  std::vector<int> stack;
  sign[0] = 1;
  stack.push_back(0);
  // adjacency via shared edges
  std::vector<std::vector<std::pair<int, int>>> nbr(face_ids.size()); // (other face, dir product)
  for (const auto& [edge, occ] : edge_faces) {
    int prod = occ[0].direction * occ[1].direction;
    nbr[occ[0].local_face].push_back({occ[1].local_face, prod});
    nbr[occ[1].local_face].push_back({occ[0].local_face, prod});
  }
  while (!stack.empty()) {
    int f = stack.back();
    stack.pop_back();
    for (auto [g, prod] : nbr[f]) {
      // consistent orientation <=> opposite traversal: sign_g = -prod * sign_f
      std::int8_t want = static_cast<std::int8_t>(-prod * sign[f]);
      if (sign[g] == 0) {
        sign[g] = want;
        stack.push_back(g);
      } else if (sign[g] != want) {
        throw OpenCellBoundary(cell_id); // non-orientable
      }
    }
  }
  for (std::int8_t s : sign)
    if (s == 0) throw OpenCellBoundary(cell_id); // boundary not connected

  // fix global flip by signed volume
  double vol = 0.0;
  std::vector<Vec3> loop;
  for (std::size_t lf = 0; lf < face_ids.size(); ++lf) {
    loop.clear();
    const auto& vl = mesh.faces[face_ids[lf]].vertex_loop;
    if (sign[lf] > 0)
      for (int v : vl) loop.push_back(mesh.point(v));
    else
      for (auto it = vl.rbegin(); it != vl.rend(); ++it) loop.push_back(mesh.point(*it));
    vol += signed_volume_contribution(loop);
  }
  if (vol < 0.0)
    for (auto& s : sign) s = -s;
  return sign;
}

} // namespace detail

// Build and validate a mesh from raw topology. Face loops may be given in
// either winding; cell face lists are unsigned face indices whose outward
// orientation is resolved here.
inline PolyMesh build_mesh(std::vector<Vec3> vertices,
                           const std::vector<std::vector<int>>& face_loops,
                           const std::vector<std::vector<int>>& cell_faces,
                           MeshMetadata meta = {}) {
  PolyMesh mesh;
  mesh.meta = std::move(meta);
  mesh.vertices = std::move(vertices);
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const Vec3& p : mesh.vertices)
    if (!p.finite()) throw Error("non-finite vertex coordinate");

  mesh.faces.resize(face_loops.size());
  for (std::size_t fi = 0; fi < face_loops.size(); ++fi) {
    const auto& loop = face_loops[fi];
    if (loop.size() < 3) throw DegenerateElement(fi, "face with fewer than 3 vertices");
    std::set<int> seen;
    for (int v : loop) {
      if (v < 0 || v >= nv) throw Error("face vertex index out of range");
      if (!seen.insert(v).second) throw DegenerateElement(fi, "repeated vertex in face loop");
    }
    PolyFace& face = mesh.faces[fi];
    face.vertex_loop = loop;
    std::vector<Vec3> pts;
    pts.reserve(loop.size());
    for (int v : loop) pts.push_back(mesh.point(v));
    FaceGeometry g = compute_face_geometry(pts, fi);
    face.area = g.area;
    face.centroid = g.centroid;
    face.diameter = g.diameter;
    face.normal = g.normal;
    face.axis_u = g.axis_u;
    face.axis_v = g.axis_v;
    face.frame_loop = std::move(g.frame_loop);
    if (g.plane_deviation > kPlanarRelEps * face.diameter)
      throw NonPlanarFace(fi, g.plane_deviation);
  }

  mesh.face_cells.assign(mesh.faces.size(), {-1, -1});
  mesh.cells.resize(cell_faces.size());
  mesh.h = 0.0;
  for (std::size_t ci = 0; ci < cell_faces.size(); ++ci) {
    PolyCell& cell = mesh.cells[ci];
    cell.face_ids = cell_faces[ci];
    if (cell.face_ids.size() < 4) throw OpenCellBoundary(ci);
    for (int f : cell.face_ids) {
      if (f < 0 || f >= static_cast<int>(mesh.faces.size()))
        throw Error("cell face index out of range");
      auto& inc = mesh.face_cells[f];
      if (inc[0] == -1)
        inc[0] = static_cast<int>(ci);
      else if (inc[1] == -1)
        inc[1] = static_cast<int>(ci);
      else
        throw DanglingFace(f);
    }
    cell.face_signs = detail::resolve_cell_orientation(mesh, cell.face_ids, ci);

    std::set<int> vset;
    for (int f : cell.face_ids)
      for (int v : mesh.faces[f].vertex_loop) vset.insert(v);
    cell.vertex_ids.assign(vset.begin(), vset.end());

    double vol = 0.0;
    Vec3 cent{0, 0, 0};
    std::vector<Vec3> loop;
    for (std::size_t lf = 0; lf < cell.face_ids.size(); ++lf) {
      loop.clear();
      auto oriented = cell.face_signs[lf] > 0 ? mesh.faces[cell.face_ids[lf]].vertex_loop
                                              : std::vector<int>(mesh.faces[cell.face_ids[lf]]
                                                                     .vertex_loop.rbegin(),
                                                                 mesh.faces[cell.face_ids[lf]]
                                                                     .vertex_loop.rend());
      for (int v : oriented) loop.push_back(mesh.point(v));
      vol += signed_volume_contribution(loop);
      cent += volume_centroid_contribution(loop);
    }
    if (vol <= kGeomEps) throw DegenerateElement(ci, "cell volume below tolerance");
    cell.volume = vol;
    cell.barycenter = cent / vol;

    std::vector<Vec3> cpts;
    cpts.reserve(cell.vertex_ids.size());
    for (int v : cell.vertex_ids) cpts.push_back(mesh.point(v));
    cell.diameter = max_pairwise_distance(cpts);
    mesh.h = std::max(mesh.h, cell.diameter);
  }

  for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    if (mesh.face_cells[fi][0] == -1) throw DanglingFace(fi);
    mesh.faces[fi].boundary = mesh.face_cells[fi][1] == -1;
  }

  mesh.boundary_vertex.assign(mesh.vertices.size(), 0);
  for (const PolyFace& f : mesh.faces)
    if (f.boundary)
      for (int v : f.vertex_loop) mesh.boundary_vertex[v] = 1;

  std::set<std::pair<int, int>> edge_set;
  for (const PolyFace& f : mesh.faces)
    for (std::size_t i = 0; i < f.vertex_loop.size(); ++i) {
      int a = f.vertex_loop[i];
      int b = f.vertex_loop[(i + 1) % f.vertex_loop.size()];
      auto key = std::minmax(a, b);
      edge_set.insert({key.first, key.second});
    }
  mesh.edges.reserve(edge_set.size());
  for (const auto& [a, b] : edge_set) mesh.edges.push_back({a, b});

  return mesh;
}

// Shortest edge of a cell, walked from its face loops.
inline double cell_min_edge(const PolyMesh& mesh, const PolyCell& cell) {
  double m = 1e300;
  for (int f : cell.face_ids) {
    const auto& loop = mesh.faces[f].vertex_loop;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      double len = dist(mesh.point(loop[i]), mesh.point(loop[(i + 1) % loop.size()]));
      m = std::min(m, len);
    }
  }
  return m;
}

// Unique undirected edge count of a single cell (for Euler checks and the
// face/edge growth statistics).
inline std::size_t cell_edge_count(const PolyMesh& mesh, const PolyCell& cell) {
  std::set<std::pair<int, int>> edges;
  for (int f : cell.face_ids) {
    const auto& loop = mesh.faces[f].vertex_loop;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      auto key = std::minmax(loop[i], loop[(i + 1) % loop.size()]);
      edges.insert({key.first, key.second});
    }
  }
  return edges.size();
}

} // namespace polyvem
