#include "mmcurv/report.hpp"

#include "mmcurv/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>

namespace mmcurv {

namespace {

using nlohmann::json;

json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json point_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(number_json(p[i]));
  return a;
}

std::string point_text(const Point& p) {
  std::string s;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += " ";
    s += format_number(p[i]);
  }
  return s;
}

// Fixed-width table printer for the human format.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const {
    std::vector<std::size_t> w(header_.size());
    for (std::size_t c = 0; c < w.size(); ++c) {
      w[c] = header_[c].size();
      for (const auto& r : rows_) w[c] = std::max(w[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(w[c]))
            << r[c];
      }
      out << '\n';
    };
    line(header_);
    std::vector<std::string> rule;
    for (auto n : w) rule.emplace_back(n, '-');
    line(rule);
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

bool CurvatureReport::any_flagged() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const CurvatureRow& r) { return r.flagged; });
}

CurvatureReport compute_curvature(const CatalogObject& obj,
                                  const std::vector<Point>& points,
                                  std::optional<double> q,
                                  const DifferentiationConfig& cfg,
                                  double tolerance, ExecPolicy policy) {
  CurvatureReport rep;
  rep.example = obj.id;
  rep.q = q;
  rep.tolerance = tolerance;
  const WeightedManifold w =
      obj.submersion ? obj.submersion->total_weighted() : *obj.manifold;
  rep.coords = w.metric.domain().names();

  // The R_q closed form belongs to the catalog's own q.
  const bool q_matches =
      q && (!obj.params.count("q") || obj.params.at("q") == *q);

  auto rows = parallel_map<CurvatureRow>(
      points.size(),
      [&](std::size_t i) {
        const ModifiedScalarReport m = modified_scalar_report(w, q, points[i], cfg);
        CurvatureRow row;
        row.index = i;
        row.point = points[i];
        row.R = m.scalar;
        row.R_inf = m.r_inf;
        row.R_q = m.r_q;
        std::optional<double> err;
        auto compare = [&](const char* name, double got) {
          if (!obj.has_oracle(name)) return;
          const double e = relative_error(got, obj.oracle(name)(points[i]));
          err = std::max(err.value_or(0.0), e);
        };
        compare(obj.submersion ? "R_M" : "R", m.scalar);
        if (!obj.submersion) compare("R_inf", m.r_inf);
        if (m.r_q && q_matches && !obj.submersion) compare("R_q", *m.r_q);
        row.oracle_error = err;
        const bool finite = std::isfinite(m.scalar) && std::isfinite(m.r_inf) &&
                            (!m.r_q || std::isfinite(*m.r_q));
        row.flagged = !finite || (err && !(*err <= tolerance));
        return row;
      },
      policy);
  rep.rows = std::move(rows);
  return rep;
}

void write_curvature(std::ostream& out, const CurvatureReport& r,
                     OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: {
      std::vector<std::string> header{"example", "index"};
      for (const auto& c : r.coords) header.push_back(c);
      header.insert(header.end(),
                    {"R", "R_inf", "q", "R_q", "oracle_error", "flagged"});
      out << csv_line(header);
      for (const auto& row : r.rows) {
        std::vector<std::string> f{r.example, std::to_string(row.index)};
        for (Eigen::Index a = 0; a < row.point.size(); ++a) {
          f.push_back(format_number(row.point[a]));
        }
        f.push_back(format_number(row.R));
        f.push_back(format_number(row.R_inf));
        f.push_back(r.q ? format_number(*r.q) : "");
        f.push_back(row.R_q ? format_number(*row.R_q) : "");
        f.push_back(row.oracle_error ? format_number(*row.oracle_error) : "");
        f.push_back(row.flagged ? "true" : "false");
        out << csv_line(f);
      }
      break;
    }
    case OutputFormat::Json: {
      for (const auto& row : r.rows) {
        json j;
        j["example"] = r.example;
        j["index"] = row.index;
        j["point"] = point_json(row.point);
        j["R"] = number_json(row.R);
        j["R_inf"] = number_json(row.R_inf);
        j["q"] = r.q ? number_json(*r.q) : json(nullptr);
        j["R_q"] = row.R_q ? number_json(*row.R_q) : json(nullptr);
        j["oracle_error"] =
            row.oracle_error ? number_json(*row.oracle_error) : json(nullptr);
        j["flagged"] = row.flagged;
        out << j.dump() << '\n';
      }
      break;
    }
    case OutputFormat::Human: {
      out << "example " << r.example;
      if (r.q) out << "  q = " << format_number(*r.q);
      out << '\n';
      std::string coords;
      for (const auto& c : r.coords) coords += (coords.empty() ? "" : " ") + c;
      Table t({"#", "point (" + coords + ")", "R", "R_inf", "R_q", "oracle err",
               "flag"});
      for (const auto& row : r.rows) {
        t.add({std::to_string(row.index), point_text(row.point),
               format_number(row.R), format_number(row.R_inf),
               row.R_q ? format_number(*row.R_q) : "-",
               row.oracle_error ? format_number(*row.oracle_error) : "-",
               row.flagged ? "FLAGGED" : ""});
      }
      t.print(out);
      break;
    }
  }
}

void write_identity_reports(std::ostream& out,
                            const std::vector<IdentityReport>& reports,
                            OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: {
      out << csv_line({"identity", "example", "index", "residual", "tolerance",
                       "passed", "notes"});
      for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.residuals.size(); ++i) {
          out << csv_line({to_string(r.identity_id), r.example,
                           std::to_string(i), format_number(r.residuals[i]),
                           format_number(r.tolerance),
                           r.passed ? "true" : "false", r.notes});
        }
      }
      break;
    }
    case OutputFormat::Json: {
      for (const auto& r : reports) {
        json j;
        j["identity"] = to_string(r.identity_id);
        j["example"] = r.example;
        json pts = json::array();
        for (const auto& p : r.sample_points) pts.push_back(point_json(p));
        j["sample_points"] = pts;
        json res = json::array();
        for (double v : r.residuals) res.push_back(number_json(v));
        j["residuals"] = res;
        j["max_abs_residual"] = number_json(r.max_abs_residual);
        j["tolerance"] = number_json(r.tolerance);
        j["passed"] = r.passed;
        j["notes"] = r.notes;
        json series = json::object();
        for (const auto& [k, v] : r.series) {
          json a = json::array();
          for (double x : v) a.push_back(number_json(x));
          series[k] = a;
        }
        j["series"] = series;
        out << j.dump() << '\n';
      }
      break;
    }
    case OutputFormat::Human: {
      Table t({"identity", "example", "samples", "max residual", "tolerance",
               "result"});
      for (const auto& r : reports) {
        t.add({to_string(r.identity_id), r.example,
               std::to_string(r.residuals.size()),
               format_number(r.max_abs_residual), format_number(r.tolerance),
               r.passed ? "pass" : "FAIL"});
      }
      t.print(out);
      for (const auto& r : reports) {
        if (!r.notes.empty()) {
          out << to_string(r.identity_id) << ": " << r.notes << '\n';
        }
      }
      break;
    }
  }
}

const std::vector<std::string>& SweepTable::field_names() {
  static const std::vector<std::string> names{
      "family",   "param_name", "param_value", "R_M_min",      "R_M_max",
      "R_B_min",  "R_B_max",    "R_Bq_min",    "R_Bq_max",     "margin",
      "max_residual", "tolerance", "flagged"};
  return names;
}

bool SweepTable::any_flagged() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const SweepRow& r) { return r.flagged; });
}

SweepTable run_sweep(const std::string& family, std::vector<double> values,
                     const SweepOptions& opts) {
  SweepTable t;
  t.family = family;
  if (family == "berger_family") {
    t.param_name = "eps";
    t.check_margin = true;
  } else if (family == "product_family") {
    t.param_name = "eps";
    t.check_margin = true;
  } else if (family == "warped_family") {
    t.param_name = "t";
  } else {
    throw ConfigError("unknown sweep family '" + family +
                      "' (expected berger_family, product_family or "
                      "warped_family)");
  }
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const double inf = std::numeric_limits<double>::infinity();
  for (double v : values) {
    Params params = opts.fixed;
    params[t.param_name] = v;
    const CatalogObject obj = build(family, params);
    const KKSubmersion& s = *obj.submersion;

    const auto samples = submersion_sample_points(obj, opts.points, opts.seed);
    const auto inv = parallel_map<SubmersionPointReport>(
        samples.size(),
        [&](std::size_t i) { return oneill_invariants(s, samples[i], opts.verify.diff); },
        opts.verify.policy);

    std::vector<Point> base;
    const std::size_t nb = std::min(opts.base_points, samples.size());
    for (std::size_t i = 0; i < nb; ++i) base.push_back(s.base_part(samples[i]));
    IdentityReport t22 = verify_theorem2_2(s, base, opts.verify);

    SweepRow row;
    row.param_value = v;
    row.R_M_min = row.R_B_min = inf;
    row.R_M_max = row.R_B_max = -inf;
    double res = 0.0;
    for (const auto& p : inv) {
      row.R_M_min = std::min(row.R_M_min, p.R_M);
      row.R_M_max = std::max(row.R_M_max, p.R_M);
      row.R_B_min = std::min(row.R_B_min, p.R_B);
      row.R_B_max = std::max(row.R_B_max, p.R_B);
      res = std::max(res, std::abs(p.residual_3_1) / std::max(1.0, std::abs(p.R_M)));
    }
    const auto& rbq = t22.series.at("R_B_q");
    row.R_Bq_min = *std::min_element(rbq.begin(), rbq.end());
    row.R_Bq_max = *std::max_element(rbq.begin(), rbq.end());
    row.margin = row.R_Bq_min - row.R_M_min;
    row.max_residual = std::max(res, t22.max_abs_residual);
    row.tolerance = opts.verify.tolerance;
    row.flagged = !(row.max_residual <= row.tolerance) ||
                  (t.check_margin && row.margin < -row.tolerance);
    t.rows.push_back(row);
  }
  return t;
}

void write_sweep(std::ostream& out, const SweepTable& t, OutputFormat format) {
  auto fields = [&](const SweepRow& r) {
    return std::vector<std::string>{
        t.family,
        t.param_name,
        format_number(r.param_value),
        format_number(r.R_M_min),
        format_number(r.R_M_max),
        format_number(r.R_B_min),
        format_number(r.R_B_max),
        format_number(r.R_Bq_min),
        format_number(r.R_Bq_max),
        format_number(r.margin),
        format_number(r.max_residual),
        format_number(r.tolerance),
        r.flagged ? "true" : "false"};
  };
  switch (format) {
    case OutputFormat::Csv:
      out << csv_line(SweepTable::field_names());
      for (const auto& r : t.rows) out << csv_line(fields(r));
      break;
    case OutputFormat::Json:
      for (const auto& r : t.rows) {
        json j;
        j["family"] = t.family;
        j["param_name"] = t.param_name;
        j["param_value"] = number_json(r.param_value);
        j["R_M_min"] = number_json(r.R_M_min);
        j["R_M_max"] = number_json(r.R_M_max);
        j["R_B_min"] = number_json(r.R_B_min);
        j["R_B_max"] = number_json(r.R_B_max);
        j["R_Bq_min"] = number_json(r.R_Bq_min);
        j["R_Bq_max"] = number_json(r.R_Bq_max);
        j["margin"] = number_json(r.margin);
        j["max_residual"] = number_json(r.max_residual);
        j["tolerance"] = number_json(r.tolerance);
        j["flagged"] = r.flagged;
        out << j.dump() << '\n';
      }
      break;
    case OutputFormat::Human: {
      Table tab(SweepTable::field_names());
      for (const auto& r : t.rows) tab.add(fields(r));
      tab.print(out);
      break;
    }
  }
}

}  // namespace mmcurv
