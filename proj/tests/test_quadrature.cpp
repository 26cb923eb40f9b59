#include <doctest.h>

#include "mmcurv/errors.hpp"
#include "mmcurv/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace mmcurv;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("quadrature") {

TEST_CASE("pairwise sum") {
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(pairwise_sum(std::vector<double>{2.5}) == 2.5);
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  std::vector<double> ints(1000);
  for (int i = 0; i < 1000; ++i) ints[i] = i + 1;
  CHECK(pairwise_sum(ints) == 500500.0);
}

TEST_CASE("grid nodes are ordered with the last axis fastest") {
  const ChartDomain d = ChartDomain::torus({{0, 1}, {0, 2}});
  const auto nodes = periodic_grid_nodes(d, {2, 4});
  REQUIRE(nodes.size() == 8);
  CHECK(nodes[1][0] == 0.0);
  CHECK(nodes[1][1] == 0.5);
  CHECK(nodes[4][0] == 0.5);
  CHECK(periodic_cell_weight(d, {2, 4}) == 0.25);
  CHECK(uniform_grid(3, 16) == GridSpec{16, 16, 16});
}

TEST_CASE("trapezoidal rule is spectrally accurate on periodic integrands") {
  const ChartDomain circle = ChartDomain::torus({{0, 2 * kPi}});
  const double exact = 2 * kPi * std::cyl_bessel_i(0.0, 1.0);
  const double got = periodic_trapezoid(circle, {32}, [](const Point& x) {
    return std::exp(std::cos(x[0]));
  });
  CHECK(got == doctest::Approx(exact).epsilon(1e-14));

  const ChartDomain t2 = ChartDomain::torus({{0, 1}, {0, 1}});
  CHECK(periodic_trapezoid(t2, {8, 8}, [](const Point&) { return 1.0; }) ==
        doctest::Approx(1.0));
  CHECK(std::abs(periodic_trapezoid(t2, {16, 16}, [](const Point& x) {
          return std::sin(2 * kPi * x[0]);
        })) < 1e-15);
}

TEST_CASE("integrals are invariant under translation of a periodic axis") {
  const ChartDomain a = ChartDomain::torus({{0, 1}});
  const ChartDomain b = ChartDomain::torus({{0.37, 1.37}});
  const auto f = [](const Point& x) { return std::exp(std::sin(2 * kPi * x[0])); };
  CHECK(periodic_trapezoid(a, {40}, f) ==
        doctest::Approx(periodic_trapezoid(b, {40}, f)).epsilon(1e-13));
}

TEST_CASE("non-periodic charts and bad grids are rejected") {
  const ChartDomain box = ChartDomain::box({{0, 1}});
  CHECK_THROWS_AS(periodic_trapezoid(box, {8}, [](const Point&) { return 1.0; }),
                  UnsupportedDomainError);
  const ChartDomain t = ChartDomain::torus({{0, 1}});
  CHECK_THROWS_AS(periodic_trapezoid(t, {8, 8}, [](const Point&) { return 1.0; }),
                  ParameterError);
  CHECK_THROWS_AS(periodic_trapezoid(t, {0}, [](const Point&) { return 1.0; }),
                  ParameterError);
}

}  // TEST_SUITE
