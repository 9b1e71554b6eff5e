#include <doctest.h>

#include <cmath>

#include "abt/body_approximation.hpp"
#include "abt/direction_measure.hpp"
#include "test_util.hpp"

using abt::Anisotropy;
using abt::Vec2;

namespace {

double hausdorff_to_disc(const abt::SymmetricPolygon& p) {
  // circumscribed polygon: the Hausdorff distance to the unit disc is the
  // largest vertex excess
  double d = 0.0;
  for (Vec2 v : p.vertices()) d = std::max(d, abt::norm(v) - 1.0);
  return d;
}

}  // namespace

TEST_CASE("disc at depth 2 is the axis-aligned tangent square") {
  auto square = abt::approximate_body(Anisotropy::constant(1.0, 2), 2);
  REQUIRE(square.vertices().size() == 4);
  for (Vec2 v : square.vertices()) {
    CHECK(std::fabs(v.x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(v.y) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("disc approximation: containment, nesting, hausdorff decay") {
  abt::BodyApproximator approx(Anisotropy::constant(1.0, 2));
  abt::Rng rng(0x0d15cULL);
  double prev_h = 1e9;
  const abt::SymmetricPolygon* prev = nullptr;
  for (int depth = 2; depth <= 12; ++depth) {
    const auto& poly = approx.polygon_at(depth);
    // containment of the disc, exact at sampled boundary points
    for (int i = 0; i < 1000; ++i) {
      Vec2 u = abt::unit_dir(rng.uniform(0.0, 2.0 * M_PI));
      CHECK(poly.gauge(u) <= 1.0);
    }
    // nesting P_k subset P_{k-1}, vertexwise
    if (prev) {
      for (Vec2 v : poly.vertices()) CHECK(prev->gauge(v) <= 1.0 + 1e-12);
    }
    double h = hausdorff_to_disc(poly);
    CHECK(h < prev_h);
    prev_h = h;
    prev = &poly;
  }
  CHECK(prev_h <= 1e-3);
}

TEST_CASE("representing measure of the diamond has two unit atoms") {
  auto diamond = abt::SymmetricPolygon::from_vertices({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  auto mu = abt::representing_measure(Anisotropy::polygonal(diamond));
  REQUIRE(mu.atoms.size() == 2);
  CHECK(mu.atoms[0].omega.x == doctest::Approx(1.0));  // folded (-1,0)
  CHECK(mu.atoms[0].omega.y == doctest::Approx(0.0));
  CHECK(mu.atoms[0].mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu.atoms[1].omega.y == doctest::Approx(1.0));
  CHECK(mu.atoms[1].mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu.reconstruction_error <= 1e-12);
}

TEST_CASE("disc measure mass approaches pi/2") {
  // Quadrature oracle: a uniform density c on the circle reconstructs the
  // Euclidean norm iff c * integral |cos| = 1, i.e. c = 1/4, total mass
  // 2 pi c = pi / 2.
  const int q = 1 << 16;
  double integral = 0.0;
  for (int i = 0; i < q; ++i) integral += std::fabs(std::cos(2.0 * M_PI * i / q)) * (2.0 * M_PI / q);
  CHECK(integral == doctest::Approx(4.0).epsilon(1e-6));
  const double expected_mass = 2.0 * M_PI / integral;

  auto mu = abt::representing_measure(Anisotropy::constant(1.0, 2), 12);
  CHECK(std::fabs(mu.total_mass() - expected_mass) <= 0.01 * expected_mass);
  CHECK(mu.reconstruction_error <= 1e-3);
}

TEST_CASE("measure error is non-increasing in depth for the disc") {
  double prev = 1e9;
  for (int depth = 3; depth <= 10; ++depth) {
    auto mu = abt::representing_measure(Anisotropy::constant(1.0, 2), depth);
    CHECK(mu.reconstruction_error <= prev + 1e-15);
    prev = mu.reconstruction_error;
  }
}

TEST_CASE("smooth elliptic gauge reconstructs within the reported error") {
  auto ellipse = Anisotropy::functional(2, [](std::span<const double> u) {
    return std::sqrt(u[0] * u[0] + 4.0 * u[1] * u[1]);
  });
  REQUIRE(abt::check_convexity(ellipse).convex);
  auto mu = abt::representing_measure(ellipse, 12);
  CHECK(mu.reconstruction_error <= 1e-3);
  abt::Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    Vec2 u = abt::unit_dir(rng.uniform(0.0, 2.0 * M_PI));
    double ratio = mu.reconstruct(u) / ellipse.norm(u);
    CHECK(ratio >= 1.0 - 2.0 * mu.reconstruction_error);
    CHECK(ratio <= 1.0 + 2.0 * mu.reconstruction_error);
  }
  // total mass bounded by 8 / inradius; the ellipse ball has inradius 1/2
  CHECK(mu.total_mass() <= 8.0 / 0.5 + 1e-6);
}

TEST_CASE("non-planar gauges are rejected") {
  auto l1 = Anisotropy::functional(3, [](std::span<const double> u) {
    return std::fabs(u[0]) + std::fabs(u[1]) + std::fabs(u[2]);
  });
  CHECK_THROWS(abt::representing_measure(l1, 8));
}
