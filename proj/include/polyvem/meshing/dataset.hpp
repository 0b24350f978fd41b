#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyvem/errors.hpp"
#include "polyvem/meshing/aggregate.hpp"
#include "polyvem/meshing/delaunay.hpp"
#include "polyvem/meshing/hex.hpp"
#include "polyvem/meshing/voronoi.hpp"
#include "polyvem/pmesh_io.hpp"
#include "polyvem/rng.hpp"
#include "polyvem/sampling.hpp"

namespace polyvem {

// A dataset is an ordered refinement sequence built from one sampling
// strategy and one meshing technique, with strictly decreasing mesh size.
struct Dataset {
  std::string label;
  std::uint64_t master_seed = 0;
  std::vector<PolyMesh> levels;
};

// the meaningful technique x strategy combinations
inline const std::vector<std::string>& dataset_labels() {
  static const std::vector<std::string> labels = {
      "tet-uniform",  "tet-anisotropic",  "tet-parallel", "tet-bcl",
      "tet-poisson",  "tet-random",       "hex-uniform",  "hex-anisotropic",
      "hex-parallel", "voro-bcl",         "voro-poisson", "voro-random",
      "poly-parallel", "poly-poisson",    "poly-random"};
  return labels;
}

inline bool is_valid_label(const std::string& label) {
  for (const std::string& l : dataset_labels())
    if (l == label) return true;
  return false;
}

inline std::pair<std::string, std::string> split_label(const std::string& label) {
  auto dash = label.find('-');
  if (dash == std::string::npos) throw Error("malformed dataset label '" + label + "'");
  return {label.substr(0, dash), label.substr(dash + 1)};
}

inline int strategy_min_t(const std::string& strategy) {
  return (strategy == "anisotropic" || strategy == "parallel" || strategy == "poisson") ? 2 : 1;
}

// Default desk-scale vertex targets; a fourth level is opt-in.
inline std::vector<std::size_t> level_targets(int levels) {
  static const std::size_t all[4] = {60, 500, 4000, 32000};
  if (levels < 1 || levels > 4) throw Error("levels must be in 1..4");
  return std::vector<std::size_t>(all, all + levels);
}

inline PolyMesh build_level_mesh(const std::string& technique, const std::string& strategy, int t,
                                 std::uint64_t seed) {
  PointCloud cloud = sample(strategy, t, seed);
  if (technique == "tet") return delaunay_tet(cloud);
  if (technique == "hex") return hex_mesh(cloud);
  if (technique == "voro") return voronoi_mesh(cloud);
  if (technique == "poly") return aggregate_poly(delaunay_tet(cloud));
  throw Error("unknown meshing technique '" + technique + "'");
}

namespace dataset_detail {

// vertex count of the level mesh for a candidate t; cheap for point-preserving
// techniques, full construction for voronoi
inline std::size_t vertex_count(const std::string& technique, const std::string& strategy, int t,
                                std::uint64_t seed) {
  if (technique == "voro") return voronoi_mesh(sample(strategy, t, seed)).vertices.size();
  return sample(strategy, t, seed).points.size();
}

// Smallest-deviation t for the target count. Counts grow monotonically with
// t up to sampling noise, so scan upward until the target is safely passed.
inline int calibrate_t(const std::string& technique, const std::string& strategy,
                       std::size_t target, std::uint64_t seed, int level) {
  const int t_min = strategy_min_t(strategy);
  int best_t = -1;
  double best_dev = 1e300;
  std::size_t floor_count = 0;
  for (int t = t_min; t <= 4096; ++t) {
    std::size_t count = vertex_count(technique, strategy, t, seed);
    if (t == t_min) floor_count = count;
    double dev = std::abs(static_cast<double>(count) - static_cast<double>(target)) /
                 static_cast<double>(target);
    if (dev < best_dev) {
      best_dev = dev;
      best_t = t;
    }
    if (count > target && dev > best_dev) break;
    if (count > 2 * target) break;
  }
  // Discrete count laws can step over a tight band (the body-centered lattice
  // jumps 35 -> 91 around a 60-vertex target) and Voronoi meshes have a count
  // floor above the coarsest targets, so the nearest achievable t is accepted
  // in those cases; anything else that misses by more than half is an error.
  if (best_t == t_min && floor_count >= target) return best_t;
  if (best_t < 0 || best_dev > 0.5)
    throw CalibrationFailed(level, "no t approximates " + std::to_string(target) + " vertices");
  return best_t;
}

} // namespace dataset_detail

inline Dataset build_dataset(const std::string& label, int levels, std::uint64_t master_seed) {
  if (!is_valid_label(label)) throw Error("unknown dataset label '" + label + "'");
  auto [technique, strategy] = split_label(label);
  Dataset ds;
  ds.label = label;
  ds.master_seed = master_seed;
  Rng root(master_seed);
  Rng labeled = root.fork(label);

  double prev_h = 1e300;
  for (int level = 0; level < levels; ++level) {
    std::uint64_t seed = labeled.fork(static_cast<std::uint64_t>(level)).next_u64();
    std::size_t target = level_targets(levels)[level];
    int t = dataset_detail::calibrate_t(technique, strategy, target, seed, level);
    PolyMesh mesh = build_level_mesh(technique, strategy, t, seed);
    mesh.meta.level = level;
    mesh.meta.rng_seed = seed;
    if (mesh.h >= prev_h)
      throw CalibrationFailed(level, "mesh size did not decrease (h=" + std::to_string(mesh.h) +
                                         ")");
    prev_h = mesh.h;
    ds.levels.push_back(std::move(mesh));
  }
  return ds;
}

inline void write_dataset(const Dataset& ds, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json meta;
  meta["label"] = ds.label;
  meta["master_seed"] = ds.master_seed;
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t i = 0; i < ds.levels.size(); ++i) {
    const PolyMesh& m = ds.levels[i];
    std::string name = "level" + std::to_string(i) + ".pmesh";
    write_mesh(m, (fs::path(dir) / name).string(), MeshFormat::PMESH);
    levels.push_back({{"level", i},
                      {"file", name},
                      {"sampling", m.meta.sampling_name},
                      {"meshing", m.meta.meshing_name},
                      {"t", m.meta.t},
                      {"seed", m.meta.rng_seed},
                      {"vertices", m.vertices.size()},
                      {"faces", m.faces.size()},
                      {"cells", m.cells.size()},
                      {"h", m.h}});
  }
  meta["levels"] = std::move(levels);
  std::ofstream out(fs::path(dir) / "metadata.json");
  out << meta.dump(2) << '\n';
}

inline Dataset read_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "metadata.json");
  if (!in) throw Error("no metadata.json under '" + dir + "'");
  nlohmann::json meta = nlohmann::json::parse(in);
  Dataset ds;
  ds.label = meta.at("label").get<std::string>();
  ds.master_seed = meta.at("master_seed").get<std::uint64_t>();
  for (const auto& lvl : meta.at("levels")) {
    PolyMesh m = read_mesh((fs::path(dir) / lvl.at("file").get<std::string>()).string());
    m.meta.sampling_name = lvl.at("sampling").get<std::string>();
    m.meta.meshing_name = lvl.at("meshing").get<std::string>();
    m.meta.t = lvl.at("t").get<int>();
    m.meta.rng_seed = lvl.at("seed").get<std::uint64_t>();
    m.meta.level = lvl.at("level").get<int>();
    ds.levels.push_back(std::move(m));
  }
  return ds;
}

} // namespace polyvem
