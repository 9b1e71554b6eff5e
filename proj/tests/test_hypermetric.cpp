#include <doctest.h>

#include <cmath>

#include "abt/hypermetric.hpp"
#include "test_util.hpp"

using abt::Anisotropy;
using abt::HypermetricBudget;
using abt::VecN;

namespace {

Anisotropy linf3() {
  return Anisotropy::functional(3, [](std::span<const double> u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::fabs(x));
    return m;
  });
}

Anisotropy lp3(double p) {
  return Anisotropy::functional(3, [p](std::span<const double> u) {
    double s = 0.0;
    for (double x : u) s += std::pow(std::fabs(x), p);
    return std::pow(s, 1.0 / p);
  });
}

double quadratic_form(const Anisotropy& norm, const abt::HypermetricCertificate& cert) {
  double q = 0.0;
  for (std::size_t i = 0; i < cert.points.size(); ++i) {
    for (std::size_t j = i + 1; j < cert.points.size(); ++j) {
      q += double(cert.coefficients[i]) * double(cert.coefficients[j]) *
           norm.norm(abt::sub(cert.points[i], cert.points[j]));
    }
  }
  return q;
}

}  // namespace

TEST_CASE("lattice grid enumeration") {
  auto g2 = abt::lattice_grid(2, 1);
  CHECK(g2.size() == 9);
  CHECK(g2.front() == VecN{-1, -1});
  CHECK(g2.back() == VecN{1, 1});
  CHECK(abt::lattice_grid(3, 1).size() == 27);
}

TEST_CASE("three points reduce to the triangle inequality") {
  // any norm passes: a = 3 with bounded integer coefficients summing to 1
  HypermetricBudget budget;
  budget.max_points = 3;
  CHECK_FALSE(abt::hypermetric_search(lp3(1.0), abt::lattice_grid(3, 1), budget).has_value());
  CHECK_FALSE(abt::hypermetric_search(linf3(), abt::lattice_grid(3, 1), budget).has_value());
  abt::Rng rng(5);
  auto planar = Anisotropy::polygonal(testutil::random_symmetric_polygon(rng, 10));
  CHECK_FALSE(abt::hypermetric_search(planar, abt::lattice_grid(2, 1), budget).has_value());
}

TEST_CASE("planar norms show no violation") {
  abt::Rng rng(9);
  HypermetricBudget budget;
  budget.max_points = 6;
  for (int trial = 0; trial < 2; ++trial) {
    auto planar = Anisotropy::polygonal(testutil::random_symmetric_polygon(rng, 8));
    CHECK_FALSE(abt::hypermetric_search(planar, abt::lattice_grid(2, 1), budget).has_value());
  }
}

TEST_CASE("linf in R3 yields a valid certificate") {
  HypermetricBudget budget;  // a <= 7, |x| <= 2
  auto cert = abt::hypermetric_search(linf3(), abt::lattice_grid(3, 1), budget);
  REQUIRE(cert.has_value());
  int coeff_sum = 0;
  for (int c : cert->coefficients) {
    CHECK(c != 0);
    CHECK(std::abs(c) <= 2);
    coeff_sum += c;
  }
  CHECK(coeff_sum == 1);
  CHECK(cert->points.size() <= 7);
  CHECK(cert->value > 1e-9);
  // recompute the form from scratch
  CHECK(quadratic_form(linf3(), *cert) == doctest::Approx(cert->value).epsilon(1e-12));
}

TEST_CASE("result does not depend on the thread count") {
  HypermetricBudget one;
  one.threads = 1;
  HypermetricBudget two;
  two.threads = 2;
  auto c1 = abt::hypermetric_search(linf3(), abt::lattice_grid(3, 1), one);
  auto c2 = abt::hypermetric_search(linf3(), abt::lattice_grid(3, 1), two);
  REQUIRE(c1.has_value());
  REQUIRE(c2.has_value());
  CHECK(c1->points == c2->points);
  CHECK(c1->coefficients == c2->coefficients);
  CHECK(c1->value == c2->value);
}
