#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polyvem/geometry/kernel.hpp"
#include "polyvem/geometry/measures.hpp"
#include "polyvem/geometry/quadrature.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/rng.hpp"
#include "test_helpers.hpp"

using namespace polyvem;
using testutil::l_shape;
using testutil::z_octagon;

TEST_CASE("face measures: unit square") {
  std::vector<Vec3> loop = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  FaceGeometry g = compute_face_geometry(loop);
  CHECK(g.area == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(g.diameter == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(g.normal.z) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(norm(g.centroid - Vec3{0.5, 0.5, 0.0}) < 1e-14);
  // frame is orthonormal
  CHECK(std::abs(dot(g.axis_u, g.axis_v)) < 1e-14);
  CHECK(norm(g.axis_u) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("face measures: equilateral triangle side 1") {
  std::vector<Vec3> loop = {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0}};
  FaceGeometry g = compute_face_geometry(loop);
  CHECK(g.area == Catch::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-13));
  CHECK(g.diameter == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("face measures: collinear loop is degenerate") {
  std::vector<Vec3> loop = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(compute_face_geometry(loop), DegenerateElement);
}

TEST_CASE("cell measures: unit cube") {
  PolyMesh m = testutil::unit_cube_mesh();
  CHECK(m.cells[0].volume == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(norm(m.cells[0].barycenter - Vec3{0.5, 0.5, 0.5}) < 1e-12);
  CHECK(m.cells[0].diameter == Catch::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("cell measures: reference tetrahedron") {
  PolyMesh m = testutil::reference_tet_mesh();
  CHECK(m.cells[0].volume == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(norm(m.cells[0].barycenter - Vec3{0.25, 0.25, 0.25}) < 1e-12);
  CHECK(m.cells[0].diameter == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("cell measures: cubic scaling") {
  std::vector<Vec3> v = {{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0},
                         {0, 0, 2}, {2, 0, 2}, {2, 2, 2}, {0, 2, 2}};
  std::vector<std::vector<int>> faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                         {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  PolyMesh m = build_mesh(v, faces, {{0, 1, 2, 3, 4, 5}});
  CHECK(m.cells[0].volume == Catch::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("kernel2d: convex polygon is its own kernel") {
  std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  ConvexPolygon2 k = kernel2d(square);
  REQUIRE_FALSE(k.empty());
  CHECK(k.area() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel2d: L-shape kernel is the unit square") {
  ConvexPolygon2 k = kernel2d(l_shape());
  REQUIRE_FALSE(k.empty());
  CHECK(k.area() == Catch::Approx(1.0).epsilon(1e-10));
  // every kernel vertex lies in [0,1]^2
  for (const Vec2& p : k.points) {
    CHECK(p.x >= -1e-9);
    CHECK(p.x <= 1.0 + 1e-9);
    CHECK(p.y >= -1e-9);
    CHECK(p.y <= 1.0 + 1e-9);
  }
  // cross-check with segment-visibility brute force on a grid
  int in_kernel_grid = 0, sees_all_grid = 0;
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) {
      Vec2 p{(i + 0.5) / 40.0 * 2.0, (j + 0.5) / 40.0 * 2.0};
      bool inside_poly = testutil::segment_inside_polygon(l_shape(), p, p + Vec2{1e-13, 0});
      if (!inside_poly) continue;
      bool in_k = false;
      // point-in-convex-polygon test against kernel
      if (!k.empty()) {
        in_k = true;
        for (std::size_t e = 0; e < k.points.size(); ++e) {
          Vec2 a = k.points[e], b = k.points[(e + 1) % k.points.size()];
          if (cross2(b - a, p - a) < -1e-9) {
            in_k = false;
            break;
          }
        }
      }
      bool sees = testutil::sees_whole_polygon(l_shape(), p);
      in_kernel_grid += in_k ? 1 : 0;
      sees_all_grid += sees ? 1 : 0;
      CHECK(in_k == sees);
    }
  CHECK(in_kernel_grid == sees_all_grid);
}

TEST_CASE("kernel2d: Z-shaped octagon has empty kernel") {
  ConvexPolygon2 k = kernel2d(z_octagon());
  CHECK(k.empty());
  CHECK(k.area() == 0.0);
  // visibility brute force confirms no sampled point sees the whole boundary
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      Vec2 p{(i + 0.5) / 30.0 * 3.0, (j + 0.5) / 30.0 * 3.0};
      if (!testutil::segment_inside_polygon(z_octagon(), p, p + Vec2{1e-13, 0})) continue;
      CHECK_FALSE(testutil::sees_whole_polygon(z_octagon(), p));
    }
}

TEST_CASE("kernel3d: unit cube is its own kernel") {
  PolyMesh m = testutil::unit_cube_mesh();
  ConvexPolyhedron k = kernel3d(m, 0);
  REQUIRE_FALSE(k.empty());
  CHECK(k.volume() == Catch::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("kernel3d: convex cells reproduce their own volume") {
  PolyMesh m = testutil::reference_tet_mesh();
  CHECK(kernel_volume(m, 0) == Catch::Approx(m.cells[0].volume).epsilon(1e-8));
}

TEST_CASE("kernel3d: two tetrahedra glued on a face, star-shaped union") {
  // apexes on both sides of the shared triangle; union is non-convex for a
  // skewed apex but star-shaped with respect to the shared face interior
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {0.4, 0.3, 0.8}, {0.6, 0.4, -0.7}};
  std::vector<std::vector<int>> faces = {
      {0, 1, 3}, {1, 2, 3}, {2, 0, 3}, // upper tet sides
      {0, 1, 4}, {1, 2, 4}, {2, 0, 4}, // lower tet sides
  };
  PolyMesh m = build_mesh(v, faces, {{0, 1, 2, 3, 4, 5}});
  double kv = kernel_volume(m, 0);
  CHECK(kv > 0.0);
  CHECK(kv <= m.cells[0].volume * (1 + 1e-9));
  double mc = testutil::mc_kernel_volume(m, 0, 400000, 1234);
  CHECK(kv == Catch::Approx(mc).epsilon(0.02));
  // kernel vertices stay inside the cell (definitional half-space test)
  ConvexPolyhedron k = kernel3d(m, 0);
  for (const Vec3& p : k.vertices) {
    for (std::size_t lf = 0; lf < m.cells[0].face_ids.size(); ++lf) {
      const PolyFace& f = m.faces[m.cells[0].face_ids[lf]];
      CHECK(dot(m.outward_normal(m.cells[0], lf), p - f.centroid) < 1e-9);
    }
  }
}

TEST_CASE("kernel3d: prism over a non-star-shaped polygon has empty kernel") {
  PolyMesh m = testutil::prism_mesh(z_octagon(), 1.0);
  CHECK(kernel_volume(m, 0) == 0.0);
}

TEST_CASE("kernel3d: L-shaped prism kernel") {
  PolyMesh m = testutil::prism_mesh(l_shape(), 1.0);
  // kernel = [0,1]^2 x [0,1]
  CHECK(kernel_volume(m, 0) == Catch::Approx(1.0).epsilon(1e-8));
  double mc = testutil::mc_kernel_volume(m, 0, 400000, 99);
  CHECK(kernel_volume(m, 0) == Catch::Approx(mc).epsilon(0.02));
}

TEST_CASE("decompose_into_tets: cube fan") {
  PolyMesh m = testutil::unit_cube_mesh();
  auto tets = decompose_into_tets(m, 0);
  CHECK(tets.size() == 24); // 6 faces x 4 fan triangles
  double vol = 0.0;
  for (const auto& t : tets) {
    double v = tet_volume(t);
    CHECK(v > 0.0);
    vol += v;
  }
  CHECK(vol == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("decompose_into_tets: tetrahedron fan") {
  PolyMesh m = testutil::reference_tet_mesh();
  auto tets = decompose_into_tets(m, 0);
  CHECK(tets.size() == 12); // 4 faces x 3
  double vol = 0.0;
  for (const auto& t : tets) vol += tet_volume(t);
  CHECK(vol == Catch::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("decompose_into_tets: non-star-shaped cell is rejected") {
  PolyMesh m = testutil::prism_mesh(z_octagon(), 1.0);
  CHECK_THROWS_AS(decompose_into_tets(m, 0), NoKernelPoint);
}

TEST_CASE("quadrature: basic cube integrals") {
  PolyMesh m = testutil::unit_cube_mesh();
  CHECK(integrate_cell(m, 0, [](const Vec3&) { return 1.0; }) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(integrate_cell(m, 0, [](const Vec3& p) { return p.x * p.y * p.z; }) ==
        Catch::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("quadrature: reference tet monomial") {
  PolyMesh m = testutil::reference_tet_mesh();
  CHECK(integrate_cell(m, 0, [](const Vec3& p) { return p.x; }) ==
        Catch::Approx(1.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("quadrature: degree-4 exactness on random convex cells") {
  // random axis-aligned boxes and random tetrahedra vs the divergence-theorem
  // oracle, all monomials of total degree <= 4
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    std::array<Vec3, 4> pts;
    do {
      for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    } while (std::abs(dot(pts[1] - pts[0], cross(pts[2] - pts[0], pts[3] - pts[0]))) < 0.01);
    PolyMesh m = testutil::single_tet_mesh(pts);
    auto tets = decompose_into_tets(m, 0);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b)
        for (int c = 0; a + b + c <= 4; ++c) {
          double got = integrate_tets(tets, [&](const Vec3& p) {
            return std::pow(p.x, a) * std::pow(p.y, b) * std::pow(p.z, c);
          });
          double want = testutil::exact_cell_monomial(m, 0, a, b, c);
          CHECK(got == Catch::Approx(want).margin(1e-10 * std::max(1.0, std::abs(want))));
        }
  }
}

TEST_CASE("quadrature: face integral") {
  PolyMesh m = testutil::unit_cube_mesh();
  // bottom face z=0: integral of x over it = 1/2
  int bottom = -1;
  for (std::size_t f = 0; f < m.faces.size(); ++f)
    if (std::abs(m.faces[f].centroid.z) < 1e-12) bottom = static_cast<int>(f);
  REQUIRE(bottom >= 0);
  CHECK(integrate_face(m, bottom, [](const Vec3& p) { return p.x; }) ==
        Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("affine equivariance: translation leaves shape ratios unchanged") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {0.4, 0.3, 0.8}, {0.6, 0.4, -0.7}};
  std::vector<std::vector<int>> faces = {{0, 1, 3}, {1, 2, 3}, {2, 0, 3},
                                         {0, 1, 4}, {1, 2, 4}, {2, 0, 4}};
  PolyMesh m1 = build_mesh(v, faces, {{0, 1, 2, 3, 4, 5}});
  Vec3 shift{17.0, -3.0, 42.0};
  for (auto& p : v) p += shift;
  PolyMesh m2 = build_mesh(v, faces, {{0, 1, 2, 3, 4, 5}});
  double r1 = kernel_volume(m1, 0) / m1.cells[0].volume;
  double r2 = kernel_volume(m2, 0) / m2.cells[0].volume;
  CHECK(r1 == Catch::Approx(r2).margin(1e-9));
  CHECK(m1.cells[0].diameter == Catch::Approx(m2.cells[0].diameter).epsilon(1e-12));
}
