#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "polyvem/mesh.hpp"
#include "polyvem/pmesh_io.hpp"
#include "test_helpers.hpp"

using namespace polyvem;

namespace {

// two half-cubes sharing the x = 1/2 face
PolyMesh two_box_mesh() {
  std::vector<Vec3> v = {
      {0, 0, 0},   {0.5, 0, 0}, {1, 0, 0},   {0, 1, 0},   {0.5, 1, 0}, {1, 1, 0},
      {0, 0, 1},   {0.5, 0, 1}, {1, 0, 1},   {0, 1, 1},   {0.5, 1, 1}, {1, 1, 1},
  };
  std::vector<std::vector<int>> faces = {
      {0, 3, 4, 1},   // bottom left
      {1, 4, 5, 2},   // bottom right
      {6, 7, 10, 9},  // top left
      {7, 8, 11, 10}, // top right
      {0, 1, 7, 6},   // front left
      {1, 2, 8, 7},   // front right
      {3, 9, 10, 4},  // back left
      {4, 10, 11, 5}, // back right
      {0, 6, 9, 3},   // x=0
      {1, 4, 10, 7},  // x=0.5 shared
      {2, 5, 11, 8},  // x=1
  };
  return build_mesh(v, faces, {{0, 2, 4, 6, 8, 9}, {1, 3, 5, 7, 9, 10}});
}

bool meshes_identical(const PolyMesh& a, const PolyMesh& b) {
  if (a.vertices.size() != b.vertices.size() || a.faces.size() != b.faces.size() ||
      a.cells.size() != b.cells.size())
    return false;
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    if (!(a.vertices[i] == b.vertices[i])) return false;
  for (std::size_t i = 0; i < a.faces.size(); ++i)
    if (a.faces[i].vertex_loop != b.faces[i].vertex_loop) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (a.cells[i].face_ids != b.cells[i].face_ids) return false;
    if (a.cells[i].face_signs != b.cells[i].face_signs) return false;
  }
  return a.h == b.h;
}

void check_cell_closure(const PolyMesh& m) {
  for (const PolyCell& c : m.cells) {
    // sum of outward-oriented face normals weighted by area vanishes
    Vec3 s{0, 0, 0};
    double total_area = 0.0;
    for (std::size_t lf = 0; lf < c.face_ids.size(); ++lf) {
      const PolyFace& f = m.faces[c.face_ids[lf]];
      s += m.outward_normal(c, lf) * f.area;
      total_area += f.area;
    }
    CHECK(norm(s) < 1e-10 * total_area);
    // Euler characteristic of a ball-like boundary
    std::size_t V = c.vertex_ids.size();
    std::size_t E = cell_edge_count(m, c);
    std::size_t F = c.face_ids.size();
    CHECK(V - E + F == 2);
  }
}

} // namespace

TEST_CASE("build_mesh: unit cube") {
  PolyMesh m = testutil::unit_cube_mesh();
  CHECK(m.cells[0].volume == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(mesh_size(m) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(m.faces.size() == 6);
  CHECK(m.edges.size() == 12);
  for (const PolyFace& f : m.faces) CHECK(f.boundary);
  check_cell_closure(m);
}

TEST_CASE("build_mesh: reference tetrahedron") {
  PolyMesh m = testutil::reference_tet_mesh();
  CHECK(m.cells[0].volume == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(mesh_size(m) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
  check_cell_closure(m);
}

TEST_CASE("build_mesh: cube missing one face is open") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                         {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  std::vector<std::vector<int>> faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                         {1, 2, 6, 5}, {2, 3, 7, 6}};
  CHECK_THROWS_AS(build_mesh(v, faces, {{0, 1, 2, 3, 4}}), OpenCellBoundary);
}

TEST_CASE("build_mesh: unreferenced face dangles") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  std::vector<std::vector<int>> faces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}, {1, 2, 4}};
  CHECK_THROWS_AS(build_mesh(v, faces, {{0, 1, 2, 3}}), DanglingFace);
}

TEST_CASE("build_mesh: repeated vertex in a loop is degenerate") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  std::vector<std::vector<int>> faces = {{0, 1, 1, 2}};
  CHECK_THROWS_AS(build_mesh(v, faces, {{0}}), DegenerateElement);
}

TEST_CASE("build_mesh: non-planar quad rejected") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0.3}, {0, 1, 0},
                         {0, 0, 1}, {1, 0, 1}, {1, 1, 1.5}, {0, 1, 1}};
  std::vector<std::vector<int>> faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                         {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  CHECK_THROWS_AS(build_mesh(v, faces, {{0, 1, 2, 3, 4, 5}}), NonPlanarFace);
}

TEST_CASE("build_mesh: interior face shared by exactly two cells") {
  PolyMesh m = two_box_mesh();
  CHECK(m.cells.size() == 2);
  int interior = 0;
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    if (!m.faces[f].boundary) {
      ++interior;
      CHECK(m.face_cells[f][0] >= 0);
      CHECK(m.face_cells[f][1] >= 0);
    }
  }
  CHECK(interior == 1);
  CHECK(m.cells[0].volume + m.cells[1].volume == Catch::Approx(1.0).epsilon(1e-12));
  check_cell_closure(m);
  // outward normals disagree across the shared face
  const PolyCell& c0 = m.cells[0];
  const PolyCell& c1 = m.cells[1];
  for (std::size_t i = 0; i < c0.face_ids.size(); ++i)
    for (std::size_t j = 0; j < c1.face_ids.size(); ++j)
      if (c0.face_ids[i] == c1.face_ids[j])
        CHECK(norm(m.outward_normal(c0, i) + m.outward_normal(c1, j)) < 1e-14);
}

TEST_CASE("mesh_size: two half-cubes") {
  PolyMesh m = two_box_mesh();
  double expected = std::sqrt(0.25 + 1 + 1);
  CHECK(mesh_size(m) == Catch::Approx(expected).epsilon(1e-14));
}

TEST_CASE("pmesh round trip preserves everything") {
  for (const PolyMesh& m :
       {testutil::unit_cube_mesh(), testutil::reference_tet_mesh(), two_box_mesh()}) {
    std::stringstream ss;
    write_pmesh(m, ss);
    PolyMesh back = read_pmesh(ss);
    CHECK(meshes_identical(m, back));
  }
}

TEST_CASE("pmesh round trip: awkward coordinates survive 17 digits") {
  std::vector<Vec3> v = {{0, 0, 0}, {1.0 / 3.0, 0, 0}, {0.1 + 0.2, 1, 0}, {0, 0, std::sqrt(2.0)}};
  std::vector<std::vector<int>> faces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  PolyMesh m = build_mesh(v, faces, {{0, 1, 2, 3}});
  std::stringstream ss;
  write_pmesh(m, ss);
  PolyMesh back = read_pmesh(ss);
  CHECK(meshes_identical(m, back));
}

TEST_CASE("pmesh: truncated file reports the line") {
  PolyMesh m = testutil::unit_cube_mesh();
  std::stringstream ss;
  write_pmesh(m, ss);
  std::string text = ss.str();
  std::string cut = text.substr(0, text.size() / 2);
  std::stringstream in(cut);
  try {
    read_pmesh(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line > 0);
  }
}

TEST_CASE("pmesh: comments are skipped") {
  std::string text =
      "PMESH 1\n# a comment\n4 4 1\n0 0 0\n1 0 0\n0 1 0\n# interlude\n0 0 1\n"
      "3 1 3 2\n3 1 2 4\n3 2 3 4\n3 1 4 3\n4 1 2 3 4\n";
  std::stringstream in(text);
  PolyMesh m = read_pmesh(in);
  CHECK(m.cells.size() == 1);
  CHECK(m.cells[0].volume == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("pmesh: wrong magic is unsupported") {
  std::stringstream in("NOTPMESH 1\n1 1 1\n");
  CHECK_THROWS_AS(read_pmesh(in), UnsupportedFormat);
}

TEST_CASE("vtk export: grammar-level sanity") {
  PolyMesh m = two_box_mesh();
  std::stringstream ss;
  write_vtk(m, ss);
  std::string text = ss.str();
  CHECK(text.rfind("# vtk DataFile Version 2.0", 0) == 0);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("CELL_TYPES 2") != std::string::npos);

  // re-parse the CELLS stream and check the declared counts add up
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line) && line.rfind("CELLS", 0) != 0) {}
  std::istringstream head(line.substr(5));
  std::size_t ncells = 0, nints = 0;
  head >> ncells >> nints;
  CHECK(ncells == 2);
  std::size_t consumed = 0;
  for (std::size_t c = 0; c < ncells; ++c) {
    std::size_t n = 0;
    in >> n;
    consumed += n + 1;
    std::size_t nf = 0;
    in >> nf;
    std::size_t used = 1;
    for (std::size_t f = 0; f < nf; ++f) {
      std::size_t k = 0;
      in >> k;
      used += 1 + k;
      for (std::size_t i = 0; i < k; ++i) {
        long v = -1;
        in >> v;
        CHECK(v >= 0);
        CHECK(v < static_cast<long>(m.vertices.size()));
      }
    }
    CHECK(used == n);
  }
  CHECK(consumed == nints);
}

TEST_CASE("point data block round trip") {
  PolyMesh m = testutil::unit_cube_mesh();
  std::string path = "pmesh_io_test.pmesh";
  write_mesh(m, path, MeshFormat::PMESH);
  std::vector<double> values = {0, 1, 2, 3, 4, 5, 6, 7.5};
  append_point_data(path, values);
  PolyMesh back = read_mesh(path);
  CHECK(meshes_identical(m, back));
  CHECK(read_point_data(path) == values);
  std::remove(path.c_str());
}
