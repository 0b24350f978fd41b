#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "polyvem/sampling.hpp"

using namespace polyvem;

namespace {

bool in_unit_cube(const Vec3& p) {
  return p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1 && p.z >= 0 && p.z <= 1;
}

bool clouds_identical(const PointCloud& a, const PointCloud& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    if (!(a.points[i] == b.points[i]) || a.tags[i] != b.tags[i]) return false;
  return true;
}

double min_pairwise(const std::vector<Vec3>& pts) {
  double m = 1e300;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::min(m, dist(pts[i], pts[j]));
  return m;
}

} // namespace

TEST_CASE("uniform sampling count law") {
  CHECK(sample_uniform(1).points.size() == 8);
  CHECK(sample_uniform(2).points.size() == 27);
  CHECK(sample_uniform(4).points.size() == 125);
  PointCloud c = sample_uniform(3);
  CHECK(c.has_grid_topology());
  for (const Vec3& p : c.points) CHECK(in_unit_cube(p));
}

TEST_CASE("anisotropic plane rule with snapping") {
  PointCloud c4 = sample_anisotropic(4);
  REQUIRE(c4.grid_z.size() == 4);
  CHECK(c4.grid_z[0] == 0.0);
  CHECK(c4.grid_z[1] == Catch::Approx(0.25));
  CHECK(c4.grid_z[2] == Catch::Approx(0.75));
  CHECK(c4.grid_z[3] == 1.0);
  CHECK(c4.points.size() == 25 * 4);

  PointCloud c2 = sample_anisotropic(2);
  REQUIRE(c2.grid_z.size() == 3);
  CHECK(c2.grid_z[1] == Catch::Approx(0.5));
  CHECK(c2.grid_z[2] == 1.0);

  // exact landing on 1 terminates without an extra plane
  PointCloud c3 = sample_anisotropic(3);
  REQUIRE(c3.grid_z.size() == 3);
  CHECK(c3.grid_z[1] == Catch::Approx(1.0 / 3.0));
  CHECK(c3.grid_z[2] == 1.0);

  CHECK_THROWS_AS(sample_anisotropic(1), SamplingFailed);
}

TEST_CASE("parallel sampling: bounded plane displacement, fixed boundary") {
  for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
    PointCloud c = sample_parallel(2, seed);
    REQUIRE(c.grid_x.size() == 3);
    CHECK(c.grid_x.front() == 0.0);
    CHECK(c.grid_x.back() == 1.0);
    CHECK(std::abs(c.grid_x[1] - 0.5) < 0.24 + 1e-12);
    CHECK(std::abs(c.grid_y[1] - 0.5) < 0.24 + 1e-12);
    CHECK(std::abs(c.grid_z[1] - 0.5) < 0.24 + 1e-12);
    // strict monotonicity at a larger t
    PointCloud big = sample_parallel(7, seed);
    for (std::size_t i = 1; i < big.grid_x.size(); ++i) {
      CHECK(big.grid_x[i] > big.grid_x[i - 1]);
      CHECK(big.grid_y[i] > big.grid_y[i - 1]);
      CHECK(big.grid_z[i] > big.grid_z[i - 1]);
    }
  }
  CHECK(clouds_identical(sample_parallel(3, 99), sample_parallel(3, 99)));
}

TEST_CASE("bcl sampling count law and center placement") {
  CHECK(sample_bcl(1).points.size() == 9);
  CHECK(sample_bcl(4).points.size() == 125 + 64);
  PointCloud c = sample_bcl(2);
  // center points sit at odd multiples of 1/(2t) in every coordinate
  int centers = 0;
  for (const Vec3& p : c.points) {
    double m = p.x * 4.0;
    if (std::abs(m - std::round(m)) < 1e-12 && static_cast<long>(std::llround(m)) % 2 == 1) {
      ++centers;
      CHECK(std::abs(p.y * 4.0 - std::round(p.y * 4.0)) < 1e-12);
    }
  }
  CHECK(centers == 8);
}

TEST_CASE("poisson sampling: spacing and counts") {
  PointCloud c = sample_poisson(4, 11);
  int corners = 0, edges = 0;
  std::vector<Vec3> interior;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    CHECK(in_unit_cube(c.points[i]));
    switch (c.tags[i]) {
      case PointTag::Corner: ++corners; break;
      case PointTag::Edge: ++edges; break;
      case PointTag::Interior: interior.push_back(c.points[i]); break;
      default: break;
    }
  }
  CHECK(corners == 8);
  CHECK(edges == 12 * 3); // 12*(t-1)
  REQUIRE(interior.size() >= 1);
  CHECK(min_pairwise(interior) >= 0.25 - 1e-12);

  CHECK(clouds_identical(sample_poisson(4, 11), sample_poisson(4, 11)));
  PointCloud c2 = sample_poisson(4, 12);
  CHECK_FALSE(clouds_identical(c, c2));

  // t=2 degenerates to single center points per entity but still works
  PointCloud tiny = sample_poisson(2, 5);
  int tiny_interior = 0;
  for (PointTag tag : tiny.tags) tiny_interior += tag == PointTag::Interior ? 1 : 0;
  CHECK(tiny_interior == 1);
}

TEST_CASE("random sampling count law") {
  PointCloud c = sample_random(2, 3);
  CHECK(c.points.size() == 8 + 24 + 24 + 8);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    CHECK(in_unit_cube(c.points[i]));
    if (c.tags[i] == PointTag::Interior) {
      CHECK(c.points[i].x > 0.0);
      CHECK(c.points[i].x < 1.0);
      CHECK(c.points[i].y > 0.0);
      CHECK(c.points[i].y < 1.0);
      CHECK(c.points[i].z > 0.0);
      CHECK(c.points[i].z < 1.0);
    }
  }
  CHECK(clouds_identical(sample_random(2, 3), sample_random(2, 3)));
}

TEST_CASE("tags match actual positions") {
  for (const char* strategy : {"uniform", "bcl"}) {
    PointCloud c = sample(strategy, 3, 0);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const Vec3& p = c.points[i];
      int walls = (p.x == 0 || p.x == 1 ? 1 : 0) + (p.y == 0 || p.y == 1 ? 1 : 0) +
                  (p.z == 0 || p.z == 1 ? 1 : 0);
      PointTag expect = walls == 3   ? PointTag::Corner
                        : walls == 2 ? PointTag::Edge
                        : walls == 1 ? PointTag::Face
                                     : PointTag::Interior;
      CHECK(c.tags[i] == expect);
    }
  }
}

TEST_CASE("pairwise distinctness") {
  for (const char* strategy : {"uniform", "anisotropic", "parallel", "bcl", "poisson", "random"}) {
    PointCloud c = sample(strategy, 3, 2718);
    std::set<std::array<long long, 3>> keys;
    for (const Vec3& p : c.points) {
      std::array<long long, 3> k = {std::llround(p.x * 1e9), std::llround(p.y * 1e9),
                                    std::llround(p.z * 1e9)};
      CHECK(keys.insert(k).second);
    }
  }
}

TEST_CASE("cloud dump format") {
  PointCloud c = sample_uniform(1);
  std::stringstream ss;
  write_cloud(c, ss);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "0 0 0 corner");
  int count = 1;
  while (std::getline(ss, line)) ++count;
  CHECK(count == 8);
}
