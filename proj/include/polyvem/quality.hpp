#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyvem/geometry/kernel.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/parallel.hpp"

namespace polyvem {

// Shape scores live in [0,1]. rho1 measures star-shapedness through kernel
// volume ratios, rho2 penalizes small edges and faces relative to the element
// diameter, rho3 penalizes high face and edge counts. A single non-star-shaped
// face or cell drives rho1, and with it the element's contribution, to zero.

// k(F)/|F|: 1 for convex faces, 0 when the face is not star-shaped.
inline double rho1_face(const PolyMesh& mesh, int face_id) {
  ConvexPolygon2 k = face_kernel(mesh, face_id);
  return k.empty() ? 0.0 : k.area() / mesh.faces[face_id].area;
}

// min(sqrt|F|, min edge) / max(sqrt|F|, h_F)
inline double rho2_face(const PolyMesh& mesh, int face_id) {
  const PolyFace& f = mesh.faces[face_id];
  double min_edge = 1e300;
  for (std::size_t i = 0; i < f.vertex_loop.size(); ++i) {
    int a = f.vertex_loop[i];
    int b = f.vertex_loop[(i + 1) % f.vertex_loop.size()];
    min_edge = std::min(min_edge, dist(mesh.point(a), mesh.point(b)));
  }
  double s = std::sqrt(f.area);
  return std::min(s, min_edge) / std::max(s, f.diameter);
}

// 3/#edges: 1 for triangles.
inline double rho3_face(const PolyMesh& mesh, int face_id) {
  return 3.0 / static_cast<double>(mesh.faces[face_id].vertex_loop.size());
}

// k(P)/|P| multiplied by the kernel ratios of all faces.
inline double rho1_cell(const PolyMesh& mesh, int cell_id) {
  double r = kernel_volume(mesh, cell_id) / mesh.cells[cell_id].volume;
  if (r <= 0.0) return 0.0;
  if (r > 1.0) r = 1.0; // convex cells can overshoot by roundoff
  for (int f : mesh.cells[cell_id].face_ids) {
    r *= rho1_face(mesh, f);
    if (r == 0.0) break;
  }
  return r;
}

// average of the volumetric size ratio and the mean face rho2
inline double rho2_cell(const PolyMesh& mesh, int cell_id) {
  const PolyCell& c = mesh.cells[cell_id];
  double min_hf = 1e300, sum = 0.0;
  for (int f : c.face_ids) {
    min_hf = std::min(min_hf, mesh.faces[f].diameter);
    sum += rho2_face(mesh, f);
  }
  double cbrt_vol = std::cbrt(c.volume);
  double volumetric = std::min(cbrt_vol, min_hf) / std::max(cbrt_vol, c.diameter);
  return 0.5 * (volumetric + sum / static_cast<double>(c.face_ids.size()));
}

// average of 4/#faces and the mean face rho3: 1 exactly for tetrahedra
inline double rho3_cell(const PolyMesh& mesh, int cell_id) {
  const PolyCell& c = mesh.cells[cell_id];
  double sum = 0.0;
  for (int f : c.face_ids) sum += rho3_face(mesh, f);
  double nf = static_cast<double>(c.face_ids.size());
  return 0.5 * (4.0 / nf + sum / nf);
}

struct ElementQuality {
  double rho1 = 0.0, rho2 = 0.0, rho3 = 0.0;
};

struct QualitySummary {
  double min_rho1 = 1.0, min_rho2 = 1.0, min_rho3 = 1.0;
  double mean_rho1 = 0.0, mean_rho2 = 0.0, mean_rho3 = 0.0;
  std::vector<int> histogram; // 10 bins of the per-element combined score
};

struct QualityReport {
  double global_rho = 0.0;
  std::vector<ElementQuality> per_element;
  QualitySummary summary;
};

// Per-element scores and the global indicator
//   rho(mesh) = sqrt( mean over cells of (rho1*rho2 + rho1*rho3)/2 ).
// Purely geometric: runs without assembling or solving anything.
inline QualityReport mesh_quality(const PolyMesh& mesh) {
  QualityReport report;
  const std::size_t n = mesh.cells.size();
  report.per_element.resize(n);
  parallel_for(n, [&](std::size_t i) {
    int ci = static_cast<int>(i);
    report.per_element[i] = {rho1_cell(mesh, ci), rho2_cell(mesh, ci), rho3_cell(mesh, ci)};
  });

  report.summary.histogram.assign(10, 0);
  double acc = 0.0;
  for (const ElementQuality& q : report.per_element) {
    double combined = 0.5 * (q.rho1 * q.rho2 + q.rho1 * q.rho3);
    acc += combined;
    int bin = std::min(9, static_cast<int>(combined * 10.0));
    report.summary.histogram[bin]++;
    report.summary.min_rho1 = std::min(report.summary.min_rho1, q.rho1);
    report.summary.min_rho2 = std::min(report.summary.min_rho2, q.rho2);
    report.summary.min_rho3 = std::min(report.summary.min_rho3, q.rho3);
    report.summary.mean_rho1 += q.rho1;
    report.summary.mean_rho2 += q.rho2;
    report.summary.mean_rho3 += q.rho3;
  }
  if (n > 0) {
    report.summary.mean_rho1 /= n;
    report.summary.mean_rho2 /= n;
    report.summary.mean_rho3 /= n;
    report.global_rho = std::sqrt(acc / static_cast<double>(n));
  }
  return report;
}

inline nlohmann::json quality_to_json(const QualityReport& report) {
  nlohmann::json j;
  j["global_rho"] = report.global_rho;
  nlohmann::json elems = nlohmann::json::array();
  for (std::size_t i = 0; i < report.per_element.size(); ++i) {
    const ElementQuality& q = report.per_element[i];
    elems.push_back({{"id", i}, {"rho1", q.rho1}, {"rho2", q.rho2}, {"rho3", q.rho3}});
  }
  j["per_element"] = std::move(elems);
  j["summary"] = {{"min_rho1", report.summary.min_rho1},
                  {"min_rho2", report.summary.min_rho2},
                  {"min_rho3", report.summary.min_rho3},
                  {"mean_rho1", report.summary.mean_rho1},
                  {"mean_rho2", report.summary.mean_rho2},
                  {"mean_rho3", report.summary.mean_rho3},
                  {"histogram", report.summary.histogram}};
  return j;
}

// --- assumption-violation evidence across a refinement sequence -----------

// Per-level shape statistics feeding the G1/G2/G3 trend detectors.
struct LevelShapeStats {
  double min_rho1 = 1.0;
  double min_edge_ratio = 1.0; // min over cells of (shortest edge / cell diameter)
  std::size_t max_faces = 0;
  std::size_t max_edges = 0;
};

inline LevelShapeStats level_shape_stats(const PolyMesh& mesh, const QualityReport& quality) {
  LevelShapeStats s;
  for (const ElementQuality& q : quality.per_element) s.min_rho1 = std::min(s.min_rho1, q.rho1);
  s.min_edge_ratio = 1e300;
  for (const PolyCell& c : mesh.cells) {
    s.min_edge_ratio = std::min(s.min_edge_ratio, cell_min_edge(mesh, c) / c.diameter);
    s.max_faces = std::max(s.max_faces, c.face_ids.size());
    s.max_edges = std::max(s.max_edges, cell_edge_count(mesh, c));
  }
  return s;
}

struct AssumptionReport {
  bool g1_violated = false; // some element or face not star-shaped
  bool g2_violated = false; // edge/diameter ratios shrink across levels
  bool g3_violated = false; // face or edge counts grow across levels
  std::vector<double> edge_ratio_series;
  std::vector<std::size_t> max_face_series;
  std::vector<std::size_t> max_edge_series;
};

// Heuristic trend detectors: the assumptions quantify over whole mesh
// families, so a finite sequence can only exhibit evidence. G2 is flagged
// when the worst edge/diameter ratio decays by more than kG2DecayFactor from
// the first to the last level; G3 when the worst face or edge count grows.
inline constexpr double kG2DecayFactor = 4.0;

inline AssumptionReport assumption_report(const std::vector<LevelShapeStats>& levels) {
  if (levels.size() < 2) throw InsufficientLevels(levels.size());
  AssumptionReport r;
  for (const LevelShapeStats& s : levels) {
    if (s.min_rho1 <= 0.0) r.g1_violated = true;
    r.edge_ratio_series.push_back(s.min_edge_ratio);
    r.max_face_series.push_back(s.max_faces);
    r.max_edge_series.push_back(s.max_edges);
  }
  double first = r.edge_ratio_series.front();
  double last = r.edge_ratio_series.back();
  if (last > 0.0 && first / last > kG2DecayFactor) r.g2_violated = true;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (r.max_face_series[i] > r.max_face_series.front()) r.g3_violated = true;
    if (r.max_edge_series[i] > r.max_edge_series.front()) r.g3_violated = true;
  }
  return r;
}

} // namespace polyvem
