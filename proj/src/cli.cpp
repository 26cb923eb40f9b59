#include "mmcurv/cli.hpp"

#include "mmcurv/catalog.hpp"
#include "mmcurv/config.hpp"
#include "mmcurv/errors.hpp"
#include "mmcurv/expr.hpp"
#include "mmcurv/report.hpp"
#include "mmcurv/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace mmcurv {

namespace {

struct Options {
  std::string config_path;
  std::string example;
  std::vector<std::string> params;
  std::optional<std::size_t> points;
  std::optional<std::size_t> base_points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<double> step;
  std::optional<int> grid;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<double> r, eps, t, alpha, n, q;
  std::vector<std::string> point;
  std::string identity = "all";
  std::string values;
  int threads = 0;
  bool serial = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "Config file with [example] etc.");
  cmd->add_option("--example", o.example, "Catalog id, or custom");
  cmd->add_option("--param", o.params, "Example parameter k=v (repeatable)");
  cmd->add_option("--points", o.points, "Number of seeded sample points");
  cmd->add_option("--seed", o.seed, "Sampling seed");
  cmd->add_option("--tol", o.tol, "Residual tolerance");
  cmd->add_option("--step", o.step, "Relative finite-difference step");
  cmd->add_option("--grid", o.grid, "Quadrature nodes per fiber axis");
  cmd->add_option("--format", o.format, "human, json or csv");
  cmd->add_option("--out", o.out, "Write the report to this file");
  cmd->add_option("--r", o.r, "Shorthand for --param r=...");
  cmd->add_option("--eps", o.eps, "Shorthand for --param eps=...");
  cmd->add_option("--t", o.t, "Shorthand for --param t=...");
  cmd->add_option("--alpha", o.alpha, "Shorthand for --param alpha=...");
  cmd->add_option("--n", o.n, "Shorthand for --param n=...");
  cmd->add_option("--q", o.q, "Weight dimension q of R_q");
  cmd->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)");
  cmd->add_flag("--serial", o.serial, "Run every kernel serially");
}

double parse_value(const std::string& text, const std::string& what) {
  try {
    return Expression::parse(text, {}).eval({});
  } catch (const ConfigError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

bool example_has_param(const std::string& id, const std::string& key) {
  for (const auto& info : catalog_entries()) {
    if (info.id == id) return info.defaults.count(key) > 0;
  }
  return false;
}

RunConfig make_run_config(const Options& o) {
  RunConfig rc;
  if (!o.config_path.empty()) apply_config(rc, load_ini(o.config_path));
  if (!o.example.empty()) {
    if (o.example != rc.example) rc.params.clear();
    rc.example = o.example;
  }
  for (const auto& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--param expects k=v, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    rc.params[key] = parse_value(kv.substr(eq + 1), "--param " + key);
  }
  const std::pair<const char*, const std::optional<double>*> shorthands[] = {
      {"r", &o.r}, {"eps", &o.eps}, {"t", &o.t}, {"alpha", &o.alpha}, {"n", &o.n}};
  for (const auto& [key, value] : shorthands) {
    if (*value) rc.params[key] = **value;
  }
  if (o.q) {
    rc.q = *o.q;
    if (example_has_param(rc.example, "q")) rc.params["q"] = *o.q;
  }
  if (o.points) rc.points = *o.points;
  if (o.base_points) rc.base_points = *o.base_points;
  if (o.seed) rc.seed = *o.seed;
  if (o.tol) {
    if (!(*o.tol > 0)) throw ConfigError("--tol must be positive");
    rc.tolerance = *o.tol;
  }
  if (o.step) rc.diff.step = *o.step;
  try {
    rc.diff.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (o.grid) {
    if (*o.grid < 4) throw ConfigError("--grid must be at least 4");
    rc.grid = *o.grid;
  }
  if (o.format) rc.format = parse_format(*o.format);
  if (o.out) rc.out_path = *o.out;
  if (rc.points == 0) throw ConfigError("--points must be positive");
  for (const auto& text : o.point) {
    const auto parts = split_list(text);
    if (parts.empty()) throw ConfigError("--point needs coordinates");
    Point p(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      p[static_cast<Eigen::Index>(i)] = parse_value(parts[i], "--point");
    }
    rc.explicit_points.push_back(p);
  }
  return rc;
}

VerifyConfig make_verify_config(const RunConfig& rc, ExecPolicy policy) {
  VerifyConfig vc;
  vc.diff = rc.diff;
  vc.fiber_nodes = rc.grid;
  if (rc.tolerance) vc.tolerance = *rc.tolerance;
  vc.policy = policy;
  return vc;
}

void check_dims(const std::vector<Point>& pts, int dim) {
  for (const auto& p : pts) {
    if (p.size() != dim) {
      throw ConfigError("--point has " + std::to_string(p.size()) +
                        " coordinates, the chart needs " + std::to_string(dim));
    }
  }
}

// Writes to --out when given, else to the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

int cmd_curvature(const RunConfig& rc, ExecPolicy policy, std::ostream& out,
                  std::ostream& err) {
  const CatalogObject obj = build_example(rc);
  std::vector<Point> pts = rc.explicit_points;
  if (pts.empty()) {
    pts = obj.submersion ? submersion_sample_points(obj, rc.points, rc.seed)
                         : sample_points(obj.sample_region, rc.points, rc.seed);
  }
  const int dim = obj.submersion ? obj.submersion->total_dim()
                                 : obj.manifold->metric.domain().dim();
  check_dims(pts, dim);
  const CurvatureReport rep = compute_curvature(
      obj, pts, rc.q, rc.diff, rc.tolerance.value_or(1e-4), policy);
  Sink sink(rc.out_path, out);
  write_curvature(sink.stream(), rep, rc.format);
  if (rep.any_flagged()) {
    err << "curvature: some rows deviate from the closed-form values\n";
    return kExitResidualFailure;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& rc, const std::string& identity_name,
               ExecPolicy policy, std::ostream& out, std::ostream& err) {
  std::vector<IdentityId> ids;
  if (identity_name == "all") {
    ids = all_identities();
  } else if (auto id = parse_identity(identity_name)) {
    ids = {*id};
  } else {
    throw ConfigError("unknown identity '" + identity_name + "'");
  }
  const CatalogObject obj = build_example(rc);
  if (!obj.submersion) {
    throw ConfigError("verify needs a submersion example; " + obj.id +
                      " is a " + to_string(obj.kind));
  }
  const KKSubmersion& s = *obj.submersion;
  const VerifyConfig vc = make_verify_config(rc, policy);

  std::vector<Point> samples = rc.explicit_points;
  if (samples.empty()) {
    samples = submersion_sample_points(obj, rc.points, rc.seed);
  }
  check_dims(samples, s.total_dim());
  std::vector<Point> base;
  for (std::size_t i = 0; i < std::min(rc.base_points, samples.size()); ++i) {
    base.push_back(s.base_part(samples[i]));
  }

  std::vector<IdentityReport> reports;
  std::vector<std::string> unmet;
  for (IdentityId id : ids) {
    std::vector<IdentityReport> parts;
    switch (id) {
      case IdentityId::Oneill:
        parts.push_back(verify_oneill_identity(s, samples, vc));
        break;
      case IdentityId::LaplacianSplit:
        for (const auto& f : submersion_test_functions(s)) {
          parts.push_back(verify_laplacian_split(s, f, samples, vc));
        }
        break;
      case IdentityId::BaseDerivatives:
        for (const auto& b : base) {
          parts.push_back(verify_base_derivative_identities(s, b, vc));
        }
        break;
      case IdentityId::MeasureHypothesis:
        parts.push_back(verify_measure_hypothesis(s, base, vc));
        break;
      case IdentityId::MainEquality:
        try {
          for (const auto& b : base) parts.push_back(verify_main_equality(s, b, vc));
        } catch (const HypothesisUnmetError& e) {
          unmet.push_back(e.what());
          continue;
        }
        break;
      case IdentityId::Theorem2_2:
        if (!s.phi_m().is_unit() && ids.size() > 1) {
          err << "theorem2-2 skipped: the example carries a non-unit density\n";
          continue;
        }
        parts.push_back(verify_theorem2_2(s, base, vc));
        break;
      case IdentityId::LieFiberVolume: {
        Vector dir = Vector::Zero(s.base_dim());
        dir[0] = 1.0;
        for (const auto& b : base) {
          parts.push_back(verify_lie_derivative_fiber_volume(s, b, dir, vc));
        }
        break;
      }
    }
    if (parts.empty()) continue;
    IdentityReport r = merge_reports(parts);
    r.example = obj.id;
    if (id == IdentityId::MeasureHypothesis && obj.expect_hypothesis_failure) {
      r.passed = !r.passed;
      r.notes += std::string(r.notes.empty() ? "" : "; ") +
                 "expected failure: the example violates the hypothesis";
    }
    reports.push_back(std::move(r));
  }

  Sink sink(rc.out_path, out);
  write_identity_reports(sink.stream(), reports, rc.format);
  for (const auto& m : unmet) err << "main-equality refused: " << m << '\n';
  if (!unmet.empty()) return kExitHypothesisUnmet;
  for (const auto& r : reports) {
    if (!r.passed) return kExitResidualFailure;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& rc, const std::string& values_text,
              ExecPolicy policy, std::ostream& out, std::ostream& err) {
  const std::string& family = rc.example;
  if (family.empty()) throw ConfigError("sweep needs --example <family>");
  std::vector<double> values;
  for (const auto& v : split_list(values_text)) {
    values.push_back(parse_value(v, "--values"));
  }
  if (values.empty()) {
    values = family == "warped_family" ? std::vector<double>{0.5, 0.0}
                                       : std::vector<double>{1, 0.5, 0.25, 0.1};
  }
  SweepOptions opts;
  opts.fixed = rc.params;
  opts.points = rc.points;
  opts.base_points = rc.base_points;
  opts.seed = rc.seed;
  opts.verify = make_verify_config(rc, policy);
  const std::string param = family == "warped_family" ? "t" : "eps";
  opts.fixed.erase(param);
  const SweepTable t = run_sweep(family, values, opts);
  Sink sink(rc.out_path, out);
  write_sweep(sink.stream(), t, rc.format);
  if (t.any_flagged()) {
    err << "sweep: flagged rows present\n";
    return kExitResidualFailure;
  }
  return kExitOk;
}

int cmd_list(std::ostream& out) {
  for (const auto& e : catalog_entries()) {
    out << e.id << " (" << to_string(e.kind) << ")";
    for (const auto& [k, v] : e.defaults) out << ' ' << k << '=' << format_number(v);
    out << "  " << e.description << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Curvature and submersion identity checks on coordinate charts",
               "mmcurv"};
  app.require_subcommand(1);
  Options o;
  auto* curvature = app.add_subcommand("curvature", "Scalar, R_inf and R_q at points");
  add_common(curvature, o);
  curvature->add_option("--point", o.point, "Chart point \"x,y,...\" (repeatable)");
  auto* verify = app.add_subcommand("verify", "Run identity checks on a submersion");
  add_common(verify, o);
  verify->add_option("--identity", o.identity, "Identity id or all");
  verify->add_option("--point", o.point, "Total-space point (repeatable)");
  verify->add_option("--base-points", o.base_points,
                     "Base points for fiber-integral checks (default 10)");
  auto* sweep = app.add_subcommand("sweep", "Collapse sweep over a family");
  add_common(sweep, o);
  sweep->add_option("--values", o.values, "Parameter values, e.g. 1,0.5,0.25");
  sweep->add_option("--base-points", o.base_points,
                    "Base points per row (default 10)");
  auto* list = app.add_subcommand("list", "List catalog examples");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mmcurv: " << e.what() << '\n';
    return kExitConfigError;
  }
  for (auto* sub : {curvature, verify, sweep}) {
    if (sub->parsed() && sub->get_help_ptr()->count() > 0) {
      out << sub->help();
      return kExitOk;
    }
  }

  try {
    if (list->parsed()) return cmd_list(out);
    const RunConfig rc = make_run_config(o);
    const ExecPolicy policy = o.serial ? ExecPolicy::Serial : ExecPolicy::OpenMP;
    set_default_policy(policy);
    set_thread_count(o.threads);
    if (curvature->parsed()) return cmd_curvature(rc, policy, out, err);
    if (verify->parsed()) return cmd_verify(rc, o.identity, policy, out, err);
    return cmd_sweep(rc, o.values, policy, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const HypothesisUnmetError& e) {
    err << "hypothesis unmet: " << e.what() << '\n';
    return kExitHypothesisUnmet;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitResidualFailure;
  }
}

}  // namespace mmcurv
