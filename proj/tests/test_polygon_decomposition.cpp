#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "abt/polygon_decomposition.hpp"
#include "test_util.hpp"

using abt::SymmetricPolygon;
using abt::Vec2;

namespace {

SymmetricPolygon diamond() {
  return SymmetricPolygon::from_vertices({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
}

SymmetricPolygon regular_polygon(int half, double radius = 1.0, double phase = 0.0) {
  std::vector<Vec2> verts;
  for (int i = 0; i < half; ++i)
    verts.push_back(abt::unit_dir(phase + M_PI * double(i) / double(half)) * radius);
  return SymmetricPolygon::from_half(std::move(verts));
}

}  // namespace

TEST_CASE("edge normals reproduce their edge lines") {
  auto rotated = diamond().rotated(10.0 * M_PI / 180.0);
  auto normals = abt::edge_normals(rotated);
  const auto& vs = rotated.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Vec2 n = normals[i];
    CHECK(std::fabs(abt::dot(n, vs[i]) - 1.0) <= 1e-12);
    CHECK(std::fabs(abt::dot(n, vs[(i + 1) % vs.size()]) - 1.0) <= 1e-12);
  }
}

TEST_CASE("diamond normals are the dual square vertices") {
  auto normals = abt::edge_normals(diamond());
  CHECK(normals[0].x == doctest::Approx(1.0));
  CHECK(normals[0].y == doctest::Approx(1.0));
  CHECK(normals[1].x == doctest::Approx(-1.0));
  CHECK(normals[1].y == doctest::Approx(1.0));
}

TEST_CASE("normal antipodality is exact") {
  abt::Rng rng(17);
  auto hexagon = regular_polygon(3, 1.3, 0.37);
  auto normals = abt::edge_normals(hexagon);
  int n = hexagon.half_count();
  for (int i = 0; i < n; ++i) {
    CHECK(normals[std::size_t(i + n)].x == -normals[std::size_t(i)].x);
    CHECK(normals[std::size_t(i + n)].y == -normals[std::size_t(i)].y);
  }
  (void)rng;
}

TEST_CASE("rotate_generic") {
  // axis-aligned square has vertices on no axis but axis-parallel edges
  auto square = SymmetricPolygon::from_vertices({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
  auto [rotated_square, angle] = abt::rotate_generic(square);
  CHECK(angle != 0.0);
  for (Vec2 v : rotated_square.vertices()) {
    CHECK(std::fabs(v.x) > 1e-9);
    CHECK(std::fabs(v.y) > 1e-9);
  }
  // diamond has all vertices on axes
  auto [rotated_diamond, angle2] = abt::rotate_generic(diamond());
  CHECK(angle2 != 0.0);
  for (Vec2 v : rotated_diamond.vertices()) {
    CHECK(std::fabs(v.x) > 1e-9);
    CHECK(std::fabs(v.y) > 1e-9);
  }
  // already generic: identity
  auto generic = regular_polygon(5, 1.0, 0.23);
  auto [same, angle3] = abt::rotate_generic(generic);
  CHECK(angle3 == 0.0);
}

TEST_CASE("diamond decomposition is the l1 identity") {
  auto dec = abt::polygon_decompose(diamond());
  REQUIRE(dec.weights.size() == 2);
  CHECK(dec.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dec.weights[1] == doctest::Approx(1.0).epsilon(1e-12));
  abt::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    Vec2 u{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(dec.reconstruct(u) == doctest::Approx(std::fabs(u.x) + std::fabs(u.y)).epsilon(1e-12));
  }
}

TEST_CASE("weight bound 8/r on regular hexagons") {
  auto hexagon = regular_polygon(3, 1.0, 0.11);
  auto dec = abt::polygon_decompose(hexagon);
  CHECK(dec.total_vertex_mass() <= 8.0 / dec.inradius_bound + 1e-9);
}

TEST_CASE("boundary reconstruction at edge midpoints") {
  abt::Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto poly = testutil::random_symmetric_polygon(rng, 12);
    auto dec = abt::polygon_decompose(poly);
    const auto& vs = poly.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      Vec2 mid = (vs[i] + vs[(i + 1) % vs.size()]) * 0.5;
      CHECK(std::fabs(dec.reconstruct(mid) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("telescoping identity against edge normals") {
  abt::Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    auto poly = testutil::random_symmetric_polygon(rng, 15);
    auto [generic, angle] = abt::rotate_generic(poly);
    auto dec = abt::polygon_decompose(generic);
    auto normals = abt::edge_normals(generic);
    const int n = generic.half_count();
    for (int k = 0; k < n; ++k) {
      Vec2 sum{0, 0};
      for (int i = 0; i <= k; ++i) sum = sum + dec.directions[std::size_t(i)] * dec.weights[std::size_t(i)];
      for (int i = k + 1; i < n; ++i) sum = sum - dec.directions[std::size_t(i)] * dec.weights[std::size_t(i)];
      CHECK(std::fabs(sum.x - normals[std::size_t(k)].x) <= 1e-9);
      CHECK(std::fabs(sum.y - normals[std::size_t(k)].y) <= 1e-9);
    }
    (void)angle;
  }
}

TEST_CASE("weights are rotation invariants") {
  abt::Rng rng(41);
  auto poly = testutil::random_symmetric_polygon(rng, 14);
  auto dec1 = abt::polygon_decompose(poly);
  auto dec2 = abt::polygon_decompose(poly.rotated(0.7123));
  std::vector<double> w1 = dec1.weights, w2 = dec2.weights;
  std::sort(w1.begin(), w1.end());
  std::sort(w2.begin(), w2.end());
  REQUIRE(w1.size() == w2.size());
  for (std::size_t i = 0; i < w1.size(); ++i) CHECK(w1[i] == doctest::Approx(w2[i]).epsilon(1e-9));
}

TEST_CASE("random corpus reconstruction") {
  abt::Rng rng(43);
  for (int trial = 0; trial < 25; ++trial) {
    auto poly = testutil::random_symmetric_polygon(rng);
    // polygon_decompose verifies the reconstruction identity internally and
    // throws on failure
    CHECK_NOTHROW((void)abt::polygon_decompose(poly));
  }
}
