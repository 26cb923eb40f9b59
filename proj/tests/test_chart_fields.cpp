#include <doctest.h>

#include "mmcurv/catalog.hpp"
#include "mmcurv/errors.hpp"
#include "mmcurv/fields.hpp"

#include <cmath>
#include <numbers>

using namespace mmcurv;

TEST_SUITE("chart_fields") {

TEST_CASE("chart construction validates its shape") {
  CHECK_THROWS_AS(ChartDomain({}, {}), ParameterError);
  CHECK_THROWS_AS(ChartDomain({{0, 1}}, {true, false}), ParameterError);
  CHECK_THROWS_AS(ChartDomain::box({{1, 1}}), ParameterError);
  CHECK_THROWS_AS(ChartDomain::box({{0, 1}}, {"a", "b"}), ParameterError);
  const ChartDomain d = ChartDomain::box({{0, 1}, {-2, 2}});
  CHECK(d.dim() == 2);
  CHECK(d.name(1) == "x2");
  CHECK_FALSE(d.all_periodic());
  CHECK(ChartDomain::torus({{0, 1}}).all_periodic());
}

TEST_CASE("interior checks honour periodic axes") {
  const ChartDomain d({{0, 1}, {0, 1}}, {false, true});
  Vector reach(2);
  reach << 0.1, 0.1;
  Point inside(2), near_wall(2), near_seam(2);
  inside << 0.5, 0.5;
  near_wall << 0.05, 0.5;
  near_seam << 0.5, 0.01;
  CHECK_NOTHROW(d.require_interior(inside, reach, "test"));
  CHECK_THROWS_AS(d.require_interior(near_wall, reach, "test"), BoundaryError);
  CHECK_NOTHROW(d.require_interior(near_seam, reach, "test"));
  CHECK(d.contains(inside));
  Point outside(2);
  outside << 1.5, 7.0;
  CHECK_FALSE(d.contains(outside));
}

TEST_CASE("product chart concatenates axes") {
  const ChartDomain a = ChartDomain::box({{0, 1}}, {"u"});
  const ChartDomain b = ChartDomain::torus({{0, 2}}, {"y"});
  const ChartDomain p = a.product(b);
  CHECK(p.dim() == 2);
  CHECK(p.name(0) == "u");
  CHECK(p.name(1) == "y");
  CHECK_FALSE(p.periodic(0));
  CHECK(p.periodic(1));
  CHECK(p.bounds(1).length() == 2.0);
}

TEST_CASE("metric evaluation rejects asymmetric or indefinite matrices") {
  const ChartDomain d = ChartDomain::box({{-1, 1}, {-1, 1}});
  MetricField skew(d, [](const Point&) {
    Matrix m(2, 2);
    m << 1, 0.1, 0, 1;
    return m;
  });
  MetricField indefinite(d, [](const Point&) {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  });
  MetricField tiny_skew(d, [](const Point&) {
    Matrix m(2, 2);
    m << 2, 0.5, 0.5 + 1e-14, 2;
    return m;
  });
  const Point x = Point::Zero(2);
  CHECK_THROWS_AS(skew.eval(x), DegenerateMetricError);
  CHECK_THROWS_AS(indefinite.eval(x), DegenerateMetricError);
  const Matrix g = tiny_skew.eval(x);
  CHECK(g(0, 1) == g(1, 0));
}

TEST_CASE("density must stay positive") {
  const ChartDomain d = ChartDomain::box({{-1, 1}});
  DensityField phi(d, [](const Point& x) { return x[0]; });
  Point a(1), b(1);
  a << 0.5;
  b << -0.5;
  CHECK(phi.eval(a) == 0.5);
  CHECK_THROWS_AS(phi.eval(b), DensityError);
  CHECK(DensityField::unit(d).is_unit());
  CHECK(DensityField::unit(d).eval(a) == 1.0);
  CHECK(phi.as_scalar()(a) == 0.5);
  CHECK_THROWS_AS(phi.as_scalar()(b), DensityError);
}

TEST_CASE("registered fields are periodic in their periodic axes") {
  const double tol = 1e-12;
  for (const char* id : {"sphere", "weighted_torus", "weighted_circle", "flat_torus"}) {
    const CatalogObject o = build(id);
    const auto& w = *o.manifold;
    const ChartDomain& d = w.metric.domain();
    for (const Point& x : sample_points(o.sample_region, 10, 7)) {
      for (int a = 0; a < d.dim(); ++a) {
        if (!d.periodic(a)) continue;
        Point y = x;
        y[a] += d.bounds(a).length();
        const Matrix diff = w.metric.eval(x) - w.metric.eval(y);
        CHECK(diff.cwiseAbs().maxCoeff() <= tol);
        CHECK(std::abs(w.phi.eval(x) - w.phi.eval(y)) <= tol * w.phi.eval(x));
      }
    }
  }
  for (const char* id : {"hopf", "warped_circle", "violating", "product"}) {
    const CatalogObject o = build(id);
    const KKSubmersion& s = *o.submersion;
    for (const Point& p : submersion_sample_points(o, 10, 3)) {
      Point y = p;
      y[s.total_dim() - 1] += s.fiber_domain().bounds(s.fiber_dim() - 1).length();
      const Matrix diff = s.total_metric().eval(p) - s.total_metric().eval(y);
      CHECK(diff.cwiseAbs().maxCoeff() <= tol);
    }
  }
}

}  // TEST_SUITE
