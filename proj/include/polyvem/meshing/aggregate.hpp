#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

namespace aggregate_detail {

// Splice two coplanar loops sharing exactly the directed edge (u,v) in A and
// (v,u) in B; the shared edge disappears and no vertex is dropped.
inline bool splice_loops(const std::vector<int>& A, const std::vector<int>& B,
                         std::vector<int>& out) {
  const int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());
  for (int i = 0; i < na; ++i) {
    int u = A[i], v = A[(i + 1) % na];
    for (int j = 0; j < nb; ++j) {
      if (B[j] == v && B[(j + 1) % nb] == u) {
        out.clear();
        // walk A from v around to u, then B from u back toward v
        for (int s = 1; s < na; ++s) out.push_back(A[(i + s) % na]);
        out.push_back(u);
        for (int s = 2; s < nb; ++s) out.push_back(B[(j + s) % nb]);
        return true;
      }
    }
  }
  return false;
}

} // namespace aggregate_detail

// Pairwise aggregation of the largest tetrahedra: repeatedly take the
// biggest unmerged cell, merge it with the unmerged neighbor behind its
// widest shared face, until ceil(fraction * #cells) cells have been absorbed
// into pairs. Adjacent coplanar faces of a merged cell are unified when the
// far side agrees (same neighbor cell, or both boundary); vertices are never
// removed. Ties break toward lower cell index, so the result is
// deterministic.
inline PolyMesh aggregate_poly(const PolyMesh& tet_mesh, double fraction = 0.2) {
  const int nc = static_cast<int>(tet_mesh.cells.size());
  const std::size_t target = static_cast<std::size_t>(std::ceil(fraction * nc));

  std::vector<int> order(nc);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double va = tet_mesh.cells[a].volume, vb = tet_mesh.cells[b].volume;
    return va != vb ? va > vb : a < b;
  });

  std::vector<int> partner(nc, -1);
  std::vector<int> shared_face(nc, -1);
  std::vector<bool> taken(nc, false);
  std::size_t absorbed = 0;
  for (int ci : order) {
    if (absorbed >= target) break;
    if (taken[ci]) continue;
    const PolyCell& cell = tet_mesh.cells[ci];
    int best_face = -1, best_nbr = -1;
    double best_area = -1.0;
    for (int f : cell.face_ids) {
      const auto& inc = tet_mesh.face_cells[f];
      int other = inc[0] == ci ? inc[1] : inc[0];
      if (other < 0 || taken[other]) continue;
      double area = tet_mesh.faces[f].area;
      if (area > best_area + kGeomEps ||
          (std::abs(area - best_area) <= kGeomEps && best_nbr >= 0 && other < best_nbr)) {
        best_area = area;
        best_face = f;
        best_nbr = other;
      }
    }
    if (best_nbr < 0) continue; // no available neighbor, skip
    taken[ci] = taken[best_nbr] = true;
    partner[ci] = best_nbr;
    partner[best_nbr] = ci;
    shared_face[ci] = shared_face[best_nbr] = best_face;
    absorbed += 2;
  }

  // rebuild cell face lists; merged pairs drop the shared face
  std::vector<std::vector<int>> new_cells;
  new_cells.reserve(nc - absorbed / 2);
  std::vector<int> owner_of_new; // representative old cell per new cell
  for (int ci = 0; ci < nc; ++ci) {
    if (partner[ci] >= 0 && partner[ci] < ci) continue; // emitted with its partner
    std::vector<int> fl;
    if (partner[ci] < 0) {
      fl = tet_mesh.cells[ci].face_ids;
    } else {
      for (int f : tet_mesh.cells[ci].face_ids)
        if (f != shared_face[ci]) fl.push_back(f);
      for (int f : tet_mesh.cells[partner[ci]].face_ids)
        if (f != shared_face[ci]) fl.push_back(f);
    }
    owner_of_new.push_back(ci);
    new_cells.push_back(std::move(fl));
  }

  // face loops copied from the source mesh; coplanar unification below works
  // on this mutable table (dropped faces are marked by emptied loops)
  std::vector<std::vector<int>> loops;
  loops.reserve(tet_mesh.faces.size());
  for (const PolyFace& f : tet_mesh.faces) loops.push_back(f.vertex_loop);

  // owner cells of each face in the NEW cell numbering
  std::vector<std::array<int, 2>> face_in(loops.size(), {-1, -1});
  for (std::size_t nci = 0; nci < new_cells.size(); ++nci)
    for (int f : new_cells[nci]) {
      if (face_in[f][0] == -1)
        face_in[f][0] = static_cast<int>(nci);
      else
        face_in[f][1] = static_cast<int>(nci);
    }

  // unify coplanar adjacent faces inside merged cells when both sides agree
  const double kDihedralTol = 1e-6; // radians
  for (std::size_t nci = 0; nci < new_cells.size(); ++nci) {
    if (partner[owner_of_new[nci]] < 0) continue;
    bool merged_any = true;
    while (merged_any) {
      merged_any = false;
      auto& fl = new_cells[nci];
      for (std::size_t a = 0; a < fl.size() && !merged_any; ++a)
        for (std::size_t b = a + 1; b < fl.size() && !merged_any; ++b) {
          int fa = fl[a], fb = fl[b];
          const Vec3 na = tet_mesh.faces[fa].normal, nb = tet_mesh.faces[fb].normal;
          double align = std::abs(dot(na, nb));
          if (align < std::cos(kDihedralTol)) continue;
          // same supporting plane?
          Vec3 d = tet_mesh.faces[fb].centroid - tet_mesh.faces[fa].centroid;
          if (std::abs(dot(na, d)) > 1e-9 * tet_mesh.faces[fa].diameter) continue;
          // the far sides must match (same neighbor cell or both boundary)
          int other_a = face_in[fa][0] == static_cast<int>(nci) ? face_in[fa][1] : face_in[fa][0];
          int other_b = face_in[fb][0] == static_cast<int>(nci) ? face_in[fb][1] : face_in[fb][0];
          if (other_a != other_b) continue;
          // orient loop b consistently with loop a before splicing
          std::vector<int> la = loops[fa], lb = loops[fb];
          if (dot(na, nb) < 0) std::reverse(lb.begin(), lb.end());
          std::vector<int> merged;
          if (!aggregate_detail::splice_loops(la, lb, merged)) continue;
          loops[fa] = merged;
          loops[fb].clear();
          auto drop = [&](std::vector<int>& faces_list) {
            faces_list.erase(std::remove(faces_list.begin(), faces_list.end(), fb),
                             faces_list.end());
          };
          drop(new_cells[nci]);
          if (other_a >= 0) drop(new_cells[other_a]);
          merged_any = true;
        }
    }
  }

  // compact the face table to the faces still referenced by some cell (the
  // shared faces of merged pairs and spliced-away halves drop out)
  std::vector<bool> used(loops.size(), false);
  for (const auto& fl : new_cells)
    for (int f : fl) used[f] = true;
  std::vector<int> remap(loops.size(), -1);
  std::vector<std::vector<int>> final_loops;
  for (std::size_t f = 0; f < loops.size(); ++f)
    if (used[f]) {
      if (loops[f].empty()) throw Error("aggregation referenced a spliced-away face");
      remap[f] = static_cast<int>(final_loops.size());
      final_loops.push_back(loops[f]);
    }
  for (auto& fl : new_cells)
    for (int& f : fl) f = remap[f];

  MeshMetadata meta = tet_mesh.meta;
  meta.meshing_name = "poly";
  return build_mesh(tet_mesh.vertices, final_loops, new_cells, meta);
}

} // namespace polyvem
