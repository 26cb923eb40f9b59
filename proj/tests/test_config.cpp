#include <doctest.h>

#include "mmcurv/config.hpp"
#include "mmcurv/diffgeo.hpp"
#include "mmcurv/errors.hpp"
#include "mmcurv/submersion.hpp"

#include <cmath>
#include <string>

using namespace mmcurv;

namespace {

std::string error_of(const std::string& text) {
  try {
    RunConfig rc;
    apply_config(rc, parse_ini(text, "test.ini"));
    build_example(rc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("ini syntax") {
  const IniFile ini = parse_ini(
      "# comment\n"
      "[example]\n"
      "id = hopf   ; trailing comment\n"
      "eps=0.5\n"
      "\n"
      "[output]\n"
      "format = csv\n",
      "a.ini");
  REQUIRE(ini.sections.size() == 2);
  CHECK(ini.section("example")->find("id")->value == "hopf");
  CHECK(ini.section("example")->find("eps")->line == 4);
  CHECK(ini.section("missing") == nullptr);
  CHECK_THROWS_WITH_AS(parse_ini("key = 1\n"), doctest::Contains(":1:"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_ini("[a]\nnovalue\n"), doctest::Contains(":2:"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a]\n[a]\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(load_ini("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("run config from sections") {
  RunConfig rc;
  apply_config(rc, parse_ini("[example]\nid = hopf\neps = 1/2\n"
                             "[differentiation]\nstep = 2e-4\nstencil_order = 2\nnested_step = 1e-3\n"
                             "[quadrature]\ngrid = 32\n"
                             "[output]\nformat = json\npoints = 7\nseed = 99\ntol = 1e-5\nq = 3\n"
                             "out = result.json\nbase_points = 4\n"));
  CHECK(rc.example == "hopf");
  CHECK(rc.params.at("eps") == 0.5);
  CHECK(rc.diff.step == 2e-4);
  CHECK(rc.diff.stencil_order == 2);
  CHECK(rc.grid == 32);
  CHECK(rc.format == OutputFormat::Json);
  CHECK(rc.points == 7);
  CHECK(rc.base_points == 4);
  CHECK(rc.seed == 99);
  CHECK(*rc.tolerance == 1e-5);
  CHECK(*rc.q == 3.0);
  CHECK(rc.out_path == "result.json");
  CHECK(build_example(rc).oracle("R_M")(Point::Zero(3)) == doctest::Approx(7.5));
}

TEST_CASE("diagnostics name the line") {
  CHECK(error_of("[bogus]\n").find("test.ini:1") != std::string::npos);
  CHECK(error_of("[example]\nid = hopf\n[quadrature]\ngrid = two\n").find("test.ini:4") !=
        std::string::npos);
  CHECK(error_of("[differentiation]\nstencil_order = 3\n").find("test.ini:1") != std::string::npos);
  CHECK(error_of("[output]\nformat = xml\n").find("test.ini:2") != std::string::npos);
  CHECK(error_of("[output]\ncolour = red\n").find("colour") != std::string::npos);
  CHECK(error_of("[example]\neps = 1\n").find("needs an id") != std::string::npos);
  CHECK(error_of("[example]\nid = hopf\nradius = 2\n").find("radius") != std::string::npos);
  CHECK(error_of("[example]\nid = custom\nkind = manifold\ncoords = x\nlower = 0\nupper = 1\n"
                 "g.0.0 = 1 + y\n")
            .find("test.ini:7") != std::string::npos);
  CHECK(error_of("[example]\nid = custom\nkind = manifold\ncoords = x\nlower = 0\nupper = 1\n"
                 "g.0.0 = 1\ntypo = 3\n")
            .find("typo") != std::string::npos);
  CHECK(error_of("[example]\nid = custom\nkind = blob\n").find("kind") != std::string::npos);
  CHECK(error_of("[example]\nid = custom\nkind = manifold\ncoords = x y\nlower = 0\nupper = 1 1\n")
            .find("bounds") != std::string::npos);
}

TEST_CASE("custom manifold: round sphere written by hand") {
  RunConfig rc;
  apply_config(rc, parse_ini("[example]\n"
                             "id = custom\n"
                             "kind = manifold\n"
                             "param.r = 2\n"
                             "coords = u, v\n"
                             "lower = 0, 0\n"
                             "upper = pi, 2*pi\n"
                             "periodic = false, true\n"
                             "g.0.0 = r^2\n"
                             "g.1.1 = r^2 * sin(u)^2\n"
                             "sample_lower = 0.3 0\n"
                             "sample_upper = 2.8 6\n"));
  const CatalogObject o = build_example(rc);
  CHECK(o.kind == CatalogKind::Manifold);
  CHECK(o.sample_region[0].lo == 0.3);
  Point x(2);
  x << 1.0, 2.0;
  CHECK(curvature_at(o.manifold->metric, x, {}).scalar == doctest::Approx(0.5).epsilon(1e-7));
  rc.params["r"] = 1.0;
  CHECK(curvature_at(build_example(rc).manifold->metric, x, {}).scalar ==
        doctest::Approx(2.0).epsilon(1e-7));
  rc.params["s"] = 1.0;
  CHECK_THROWS_AS(build_example(rc), ConfigError);
}

TEST_CASE("custom weighted line") {
  RunConfig rc;
  apply_config(rc, parse_ini("[example]\nid = custom\nkind = weighted\ncoords = x\n"
                             "lower = -5\nupper = 5\ng.0.0 = 1\nphi = exp(-x^2/2)\n"));
  const CatalogObject o = build_example(rc);
  CHECK(o.kind == CatalogKind::Weighted);
  Point x(1);
  x << 0.0;
  CHECK(o.manifold->phi.eval(x) == 1.0);
}

TEST_CASE("custom submersion: hopf written by hand") {
  RunConfig rc;
  apply_config(rc, parse_ini("[example]\n"
                             "id = custom\n"
                             "kind = submersion\n"
                             "param.eps = 0.5\n"
                             "base_coords = u v\n"
                             "base_lower = 0 0\n"
                             "base_upper = pi 2*pi\n"
                             "base_periodic = no yes\n"
                             "fiber_coords = y\n"
                             "fiber_lower = 0\n"
                             "fiber_upper = 2*pi\n"
                             "gB.0.0 = 1/4\n"
                             "gB.1.1 = sin(u)^2/4\n"
                             "gF.0.0 = eps^2\n"
                             "A.0.1 = (1 - cos(u))/2\n"
                             "sample_lower = 0.2 0\n"
                             "sample_upper = 2.9 6.28\n"));
  const CatalogObject o = build_example(rc);
  REQUIRE(o.submersion.has_value());
  Point p(3);
  p << 1.0, 0.4, 2.0;
  CHECK(oneill_invariants(*o.submersion, p, {}).R_M == doctest::Approx(7.5).epsilon(1e-6));
  CHECK(error_of("[example]\nid = custom\nkind = submersion\nbase_coords = u\nbase_lower = 0\n"
                 "base_upper = 1\nfiber_coords = y\nfiber_lower = 0\nfiber_upper = 1\n"
                 "fiber_periodic = false\ngB.0.0 = 1\ngF.0.0 = 1\n")
            .find("periodic") != std::string::npos);
}

TEST_CASE("list splitting and formats") {
  CHECK(split_list(" a, b  c,,d ") == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(parse_format("csv") == OutputFormat::Csv);
  CHECK_THROWS_AS(parse_format("yaml"), ConfigError);
  RunConfig empty;
  CHECK_THROWS_AS(build_example(empty), ConfigError);
  empty.example = "custom";
  CHECK_THROWS_AS(build_example(empty), ConfigError);
}

}  // TEST_SUITE
