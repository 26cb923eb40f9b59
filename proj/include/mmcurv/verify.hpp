#pragma once

#include "mmcurv/submersion.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mmcurv {

enum class IdentityId {
  Oneill,             // scalar curvature splitting R_M = R_B + R_F - ...
  LaplacianSplit,     // Laplacian splitting + gradient Pythagoras
  BaseDerivatives,    // derivative, Laplacian and gradient-square of phi_B
  MeasureHypothesis,  // fiberwise constancy criterion
  MainEquality,       // phi_B R^B_inf = fiber integral
  Theorem2_2,         // R^B_q >= avg(R_M - R_F) for phi_M = 1
  LieFiberVolume,     // flow derivative of dvol_F
};

std::string to_string(IdentityId id);
/// Parses the CLI spelling ("oneill", "laplacian-split", ...).
std::optional<IdentityId> parse_identity(const std::string& name);
const std::vector<IdentityId>& all_identities();

/// Outcome of one identity check. passed <=> max_abs_residual <= tolerance;
/// call finalize() after filling residuals.
struct IdentityReport {
  IdentityId identity_id = IdentityId::Oneill;
  std::string example;
  std::vector<Point> sample_points;
  std::vector<double> residuals;
  double max_abs_residual = 0.0;
  bool passed = false;
  double tolerance = 0.0;
  std::string notes;
  /// Named per-sample auxiliary values (slacks, oracle comparisons, ...).
  std::map<std::string, std::vector<double>> series;

  void finalize();
};

struct VerifyConfig {
  DifferentiationConfig diff;
  int fiber_nodes = 64;
  double tolerance = 1e-4;
  /// Fiberwise standard deviation below which the measure hypothesis holds.
  double hypothesis_tolerance = 1e-6;
  /// Lower bound for pointwise |T|^2 - |N|^2/q.
  double cauchy_schwarz_tolerance = 1e-8;
  double lie_t_step = 1e-3;
  ExecPolicy policy = default_policy();

  GridSpec fiber_grid(const KKSubmersion& s) const {
    return uniform_grid(s.fiber_dim(), fiber_nodes);
  }
};

IdentityReport verify_oneill_identity(const KKSubmersion& s,
                                      const std::vector<Point>& samples,
                                      const VerifyConfig& vc);

IdentityReport verify_laplacian_split(const KKSubmersion& s, const ScalarFn& f,
                                      const std::vector<Point>& samples,
                                      const VerifyConfig& vc);

/// Residual families: d_e phi_B, lap phi_B, |grad phi_B|^2/phi_B against
/// their fiber integrals, for each base frame direction e. The third family
/// counts toward pass/fail only when the measure hypothesis holds at b;
/// otherwise its gap is reported in series["gradient_square_gap"] only.
IdentityReport verify_base_derivative_identities(const KKSubmersion& s,
                                                 const Point& b,
                                                 const VerifyConfig& vc);

/// One residual per base point: the largest fiberwise standard deviation.
IdentityReport verify_measure_hypothesis(const KKSubmersion& s,
                                         const std::vector<Point>& base_points,
                                         const VerifyConfig& vc);

/// Throws HypothesisUnmetError when the measure hypothesis fails at b.
IdentityReport verify_main_equality(const KKSubmersion& s, const Point& b,
                                    const VerifyConfig& vc);

/// Requires phi_M = 1 (ParameterError otherwise).
IdentityReport verify_theorem2_2(const KKSubmersion& s,
                                 const std::vector<Point>& base_points,
                                 const VerifyConfig& vc);

/// direction is a base coordinate vector; the flow of its horizontal lift is
/// integrated for +-t and +-2t.
IdentityReport verify_lie_derivative_fiber_volume(const KKSubmersion& s,
                                                  const Point& b,
                                                  const Vector& direction,
                                                  const VerifyConfig& vc);

/// Merges per-base-point reports of one identity into a single report.
IdentityReport merge_reports(const std::vector<IdentityReport>& parts);

}  // namespace mmcurv
