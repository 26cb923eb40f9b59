#pragma once

#include "mmcurv/catalog.hpp"
#include "mmcurv/config.hpp"
#include "mmcurv/verify.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmcurv {

/// Shortest "%.12g" rendering; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double v);
std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

struct CurvatureRow {
  std::size_t index = 0;
  Point point;
  double R = 0.0;
  double R_inf = 0.0;
  std::optional<double> R_q;
  /// Largest relative deviation from the example's closed forms, if any.
  std::optional<double> oracle_error;
  bool flagged = false;
};

struct CurvatureReport {
  std::string example;
  std::vector<std::string> coords;
  std::optional<double> q;
  double tolerance = 1e-4;
  std::vector<CurvatureRow> rows;

  bool any_flagged() const;
};

/// Scalar, R_inf and R_q at each point (total-space points for submersions).
CurvatureReport compute_curvature(const CatalogObject& obj,
                                  const std::vector<Point>& points,
                                  std::optional<double> q,
                                  const DifferentiationConfig& cfg,
                                  double tolerance,
                                  ExecPolicy policy = default_policy());

void write_curvature(std::ostream& out, const CurvatureReport& r,
                     OutputFormat format);

/// CSV emits one row per residual with a single header; JSON emits one
/// object per report per line.
void write_identity_reports(std::ostream& out,
                            const std::vector<IdentityReport>& reports,
                            OutputFormat format);

struct SweepRow {
  double param_value = 0.0;
  double R_M_min = 0.0;
  double R_M_max = 0.0;
  double R_B_min = 0.0;
  double R_B_max = 0.0;
  double R_Bq_min = 0.0;
  double R_Bq_max = 0.0;
  /// R_Bq_min - R_M_min
  double margin = 0.0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool flagged = false;
};

struct SweepTable {
  std::string family;
  std::string param_name;
  /// Whether a negative margin flags the row.
  bool check_margin = false;
  std::vector<SweepRow> rows;

  static const std::vector<std::string>& field_names();
  bool any_flagged() const;
};

struct SweepOptions {
  Params fixed;
  std::size_t points = 25;
  std::size_t base_points = 10;
  std::uint64_t seed = 1;
  VerifyConfig verify;
};

/// Family ids: berger_family (eps), product_family (eps), warped_family (t).
/// Rows come back sorted by parameter value, descending.
SweepTable run_sweep(const std::string& family, std::vector<double> values,
                     const SweepOptions& opts);

void write_sweep(std::ostream& out, const SweepTable& t, OutputFormat format);

}  // namespace mmcurv
