#include <doctest.h>

#include "mmcurv/errors.hpp"
#include "mmcurv/report.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace mmcurv;

TEST_SUITE("report") {

TEST_CASE("number formatting is fixed") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("csv quoting") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  CHECK(csv_line({"a", "b,c", ""}) == "a,\"b,c\",\r\n");
}

TEST_CASE("curvature report flags oracle mismatches") {
  const CatalogObject s = build("sphere", {{"r", 2.0}});
  const auto pts = sample_points(s.sample_region, 4, 1);
  const CurvatureReport ok = compute_curvature(s, pts, std::nullopt, {}, 1e-4);
  CHECK_FALSE(ok.any_flagged());
  CHECK(ok.rows.size() == 4);
  CHECK(ok.coords == std::vector<std::string>{"u", "v"});
  DifferentiationConfig coarse;
  coarse.step = 0.05;
  coarse.stencil_order = 2;
  CHECK(compute_curvature(s, pts, std::nullopt, coarse, 1e-8).any_flagged());

  const CatalogObject g = build("gaussian_line", {{"q", 2.0}});
  Point x(1);
  x << 1.0;
  const CurvatureReport r = compute_curvature(g, {x}, 2.0, {}, 1e-6);
  CHECK(*r.rows[0].R_q == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(r.rows[0].oracle_error.has_value());
  CHECK_FALSE(r.any_flagged());
}

TEST_CASE("curvature output formats") {
  const CatalogObject t = build("flat_torus");
  const auto pts = sample_points(t.sample_region, 2, 1);
  const CurvatureReport r = compute_curvature(t, pts, 1.0, {}, 1e-4);
  std::ostringstream csv, json, human;
  write_curvature(csv, r, OutputFormat::Csv);
  write_curvature(json, r, OutputFormat::Json);
  write_curvature(human, r, OutputFormat::Human);
  CHECK(csv.str().rfind("example,index,x1,x2,R,R_inf,q,R_q,oracle_error,flagged\r\n", 0) == 0);
  std::istringstream lines(json.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["example"] == "flat_torus");
    CHECK(j["R"].get<double>() == 0.0);
    ++n;
  }
  CHECK(n == 2);
  CHECK(human.str().find("flat_torus") != std::string::npos);
}

TEST_CASE("identity report output") {
  IdentityReport r;
  r.identity_id = IdentityId::Oneill;
  r.example = "hopf";
  r.tolerance = 1e-4;
  r.residuals = {1e-9, 2e-9};
  r.notes = "note, with comma";
  r.series["slack"] = {0.5, std::nan("")};
  r.finalize();
  std::ostringstream csv, json;
  write_identity_reports(csv, {r}, OutputFormat::Csv);
  write_identity_reports(json, {r}, OutputFormat::Json);
  CHECK(csv.str() ==
        "identity,example,index,residual,tolerance,passed,notes\r\n"
        "oneill,hopf,0,1e-09,0.0001,true,\"note, with comma\"\r\n"
        "oneill,hopf,1,2e-09,0.0001,true,\"note, with comma\"\r\n");
  const auto j = nlohmann::json::parse(json.str());
  CHECK(j["passed"] == true);
  CHECK(j["series"]["slack"][1].is_null());
}

TEST_CASE("berger sweep") {
  SweepOptions opts;
  opts.points = 8;
  opts.base_points = 3;
  opts.verify.fiber_nodes = 32;
  const SweepTable t = run_sweep("berger_family", {0.25, 1.0, 0.5}, opts);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].param_value == 1.0);
  CHECK(t.rows[2].param_value == 0.25);
  for (const auto& row : t.rows) {
    const double eps = row.param_value;
    CHECK(row.R_M_min == doctest::Approx(8 - 2 * eps * eps).epsilon(1e-6));
    CHECK(row.R_Bq_min == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(row.margin == doctest::Approx(2 * eps * eps).epsilon(1e-5));
    CHECK_FALSE(row.flagged);
  }
  std::ostringstream csv;
  write_sweep(csv, t, OutputFormat::Csv);
  std::string header = csv.str().substr(0, csv.str().find("\r\n"));
  std::string expected;
  for (const auto& f : SweepTable::field_names()) expected += (expected.empty() ? "" : ",") + f;
  CHECK(header == expected);
  CHECK_THROWS_AS(run_sweep("hopf", {1.0}, opts), ConfigError);
  CHECK_THROWS_AS(run_sweep("berger_family", {}, opts), ConfigError);
}

TEST_CASE("product and warped sweeps") {
  SweepOptions opts;
  opts.points = 5;
  opts.base_points = 2;
  opts.verify.fiber_nodes = 16;
  const SweepTable p = run_sweep("product_family", {1.0, 0.1}, opts);
  for (const auto& row : p.rows) {
    CHECK(std::abs(row.R_M_min) < 1e-6);
    CHECK(std::abs(row.R_M_max) < 1e-6);
    CHECK(std::abs(row.R_Bq_max) < 1e-6);
    CHECK_FALSE(row.flagged);
  }
  const SweepTable w = run_sweep("warped_family", {0.0, 0.5}, opts);
  CHECK(w.rows[0].param_value == 0.5);
  // t = 0 is the product of the unit sphere with a circle.
  CHECK(w.rows[1].R_M_min == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(w.rows[1].R_M_max == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(w.rows[1].R_Bq_min == doctest::Approx(2.0).epsilon(1e-6));
}

}  // TEST_SUITE
