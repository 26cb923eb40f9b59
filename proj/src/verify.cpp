#include "mmcurv/verify.hpp"

#include "mmcurv/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mmcurv {

namespace {

struct IdentityName {
  IdentityId id;
  const char* name;
};

constexpr std::array<IdentityName, 7> kNames{{
    {IdentityId::Oneill, "oneill"},
    {IdentityId::LaplacianSplit, "laplacian-split"},
    {IdentityId::BaseDerivatives, "base-derivatives"},
    {IdentityId::MeasureHypothesis, "measure-hypothesis"},
    {IdentityId::MainEquality, "main-equality"},
    {IdentityId::Theorem2_2, "theorem2-2"},
    {IdentityId::LieFiberVolume, "lie-fiber-volume"},
}};

double scaled(double residual, double magnitude) {
  return residual / std::max(1.0, std::abs(magnitude));
}

void append(std::vector<double>& dst, const std::vector<double>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

std::string to_string(IdentityId id) {
  for (const auto& n : kNames) {
    if (n.id == id) return n.name;
  }
  return "unknown";
}

std::optional<IdentityId> parse_identity(const std::string& name) {
  for (const auto& n : kNames) {
    if (name == n.name) return n.id;
  }
  return std::nullopt;
}

const std::vector<IdentityId>& all_identities() {
  static const std::vector<IdentityId> ids = [] {
    std::vector<IdentityId> v;
    for (const auto& n : kNames) v.push_back(n.id);
    return v;
  }();
  return ids;
}

void IdentityReport::finalize() {
  max_abs_residual = 0.0;
  bool finite = true;
  for (double r : residuals) {
    if (!std::isfinite(r)) finite = false;
    max_abs_residual = std::max(max_abs_residual, std::abs(r));
  }
  passed = finite && max_abs_residual <= tolerance;
  if (!finite) max_abs_residual = std::numeric_limits<double>::infinity();
}

IdentityReport merge_reports(const std::vector<IdentityReport>& parts) {
  if (parts.empty()) throw ParameterError("no reports to merge");
  IdentityReport out;
  out.identity_id = parts.front().identity_id;
  out.example = parts.front().example;
  out.tolerance = parts.front().tolerance;
  for (const auto& p : parts) {
    out.sample_points.insert(out.sample_points.end(), p.sample_points.begin(),
                             p.sample_points.end());
    append(out.residuals, p.residuals);
    for (const auto& [k, v] : p.series) append(out.series[k], v);
    if (!p.notes.empty() &&
        out.notes.find(p.notes) == std::string::npos) {
      if (!out.notes.empty()) out.notes += "; ";
      out.notes += p.notes;
    }
  }
  out.finalize();
  return out;
}

IdentityReport verify_oneill_identity(const KKSubmersion& s,
                                      const std::vector<Point>& samples,
                                      const VerifyConfig& vc) {
  const auto reports = parallel_map<SubmersionPointReport>(
      samples.size(),
      [&](std::size_t i) { return oneill_invariants(s, samples[i], vc.diff); },
      vc.policy);
  IdentityReport r;
  r.identity_id = IdentityId::Oneill;
  r.sample_points = samples;
  r.tolerance = vc.tolerance;
  double worst_cs = 0.0;
  for (const auto& p : reports) {
    r.residuals.push_back(scaled(p.residual_3_1, p.R_M));
    r.series["R_M"].push_back(p.R_M);
    r.series["R_B"].push_back(p.R_B);
    r.series["R_F"].push_back(p.R_F);
    r.series["A_norm2"].push_back(p.A_norm2);
    r.series["T_norm2"].push_back(p.T_norm2);
    r.series["N_norm2"].push_back(p.N_norm2);
    r.series["check_delta_N"].push_back(p.check_delta_N);
    r.series["cauchy_schwarz_slack"].push_back(p.cauchy_schwarz_slack);
    worst_cs = std::min(worst_cs, p.cauchy_schwarz_slack);
  }
  r.finalize();
  if (worst_cs < -vc.cauchy_schwarz_tolerance) {
    r.passed = false;
    r.notes = "pointwise |T|^2 - |N|^2/q negative";
  }
  return r;
}

IdentityReport verify_laplacian_split(const KKSubmersion& s, const ScalarFn& f,
                                      const std::vector<Point>& samples,
                                      const VerifyConfig& vc) {
  const auto parts = parallel_map<LaplacianSplit>(
      samples.size(),
      [&](std::size_t i) { return laplacian_split(s, f, samples[i], vc.diff); },
      vc.policy);
  IdentityReport r;
  r.identity_id = IdentityId::LaplacianSplit;
  r.sample_points = samples;
  r.tolerance = vc.tolerance;
  std::vector<double> pyth;
  for (const auto& p : parts) {
    r.residuals.push_back(scaled(p.split_residual(), p.laplacian_M));
    pyth.push_back(scaled(p.pythagoras_residual(), p.grad_M_sq));
    r.series["laplacian_M"].push_back(p.laplacian_M);
    r.series["laplacian_hor"].push_back(p.laplacian_hor);
    r.series["laplacian_F"].push_back(p.laplacian_F);
    r.series["grad_hor_dot_N"].push_back(p.grad_hor_dot_N);
  }
  r.series["split_residual"] = r.residuals;
  r.series["pythagoras_residual"] = pyth;
  append(r.residuals, pyth);
  r.finalize();
  return r;
}

IdentityReport verify_base_derivative_identities(const KKSubmersion& s,
                                                 const Point& b,
                                                 const VerifyConfig& vc) {
  const int n = s.base_dim();
  const GridSpec grid = vc.fiber_grid(s);
  const DifferentiationConfig& cfg = vc.diff;
  const bool unit = s.phi_m().is_unit();
  const ScalarField phi_total = s.phi_m().as_scalar();
  const MetricField total = s.total_metric();

  // Per node: h_a phi (a < n), Laplacian bracket * phi, |h|^2 phi.
  const auto integrals = fiber_integrate_many(
      s, b,
      [&](const Point& p) {
        const FiberGeometry fg = fiber_geometry(s, p, cfg);
        const double ph = s.phi_m().eval(p);
        const Vector dphi =
            unit ? Vector::Zero(p.size()) : partials(phi_total, p, cfg);
        std::vector<double> v(n + 2, 0.0);
        double h2 = 0.0;
        double hor_grad2 = 0.0;
        for (int a = 0; a < n; ++a) {
          const Vector e = fg.frame.horizontal.col(a);
          const double ephi = dphi.dot(e) / ph;
          const double h = ephi - e.dot(fg.g * fg.mean_curvature);
          v[a] = h * ph;
          h2 += h * h;
          hor_grad2 += ephi * ephi;
        }
        double hor_lap = 0.0;
        if (!unit) {
          const Matrix hess = hessian(total, phi_total, p, cfg);
          for (int a = 0; a < n; ++a) {
            const Vector e = fg.frame.horizontal.col(a);
            hor_lap += e.dot(hess * e);
          }
        }
        const double dn = check_delta_N(s, fg, cfg);
        v[n] = (hor_lap / ph - hor_grad2 + dn + h2) * ph;
        v[n + 1] = h2 * ph;
        return v;
      },
      static_cast<std::size_t>(n + 2), grid, vc.policy);

  const MetricField gb = s.base_metric();
  const DensityField phi_b = pushforward_density(s, grid);
  const ScalarField phi_b_field = phi_b.as_scalar();
  const Vector dphib = partials(phi_b_field, b, cfg);
  const AdaptedFrame frame = adapted_frame(s, s.join(b, Vector::Zero(s.fiber_dim())));
  const double phib = phi_b.eval(b);
  const double lap_b = laplacian(gb, phi_b_field, b, cfg);
  const double grad2_b = gradient(gb, phi_b_field, b, cfg).norm2 / phib;

  const MeasurePreservationCheck mp =
      check_measure_preserving(s, b, grid, cfg, vc.policy);
  const bool hypothesis = mp.max_fiber_variance <= vc.hypothesis_tolerance;

  IdentityReport r;
  r.identity_id = IdentityId::BaseDerivatives;
  r.sample_points = {b};
  r.tolerance = vc.tolerance;
  for (int a = 0; a < n; ++a) {
    const double lhs = dphib.dot(frame.base_frame.col(a));
    const double res = scaled(lhs - integrals[a], lhs);
    r.residuals.push_back(res);
    r.series["derivative_lhs"].push_back(lhs);
    r.series["derivative_rhs"].push_back(integrals[a]);
    r.series["derivative_residual"].push_back(res);
  }
  const double lap_res = scaled(lap_b - integrals[n], lap_b);
  r.residuals.push_back(lap_res);
  r.series["laplacian_lhs"] = {lap_b};
  r.series["laplacian_rhs"] = {integrals[n]};
  r.series["laplacian_residual"] = {lap_res};
  const double gap = grad2_b - integrals[n + 1];
  r.series["gradient_square_lhs"] = {grad2_b};
  r.series["gradient_square_rhs"] = {integrals[n + 1]};
  r.series["gradient_square_gap"] = {gap};
  r.series["fiber_stddev"] = {mp.max_fiber_variance};
  if (hypothesis) {
    r.residuals.push_back(scaled(gap, grad2_b));
  } else {
    r.notes = "measure hypothesis unmet: gradient-square identity informational";
  }
  r.finalize();
  return r;
}

IdentityReport verify_measure_hypothesis(const KKSubmersion& s,
                                         const std::vector<Point>& base_points,
                                         const VerifyConfig& vc) {
  IdentityReport r;
  r.identity_id = IdentityId::MeasureHypothesis;
  r.sample_points = base_points;
  r.tolerance = vc.hypothesis_tolerance;
  const GridSpec grid = vc.fiber_grid(s);
  const auto checks = parallel_map<MeasurePreservationCheck>(
      base_points.size(),
      [&](std::size_t i) {
        return check_measure_preserving(s, base_points[i], grid, vc.diff,
                                        ExecPolicy::Serial);
      },
      vc.policy);
  for (const auto& c : checks) r.residuals.push_back(c.max_fiber_variance);
  r.series["max_fiber_stddev"] = r.residuals;
  r.finalize();
  return r;
}

IdentityReport verify_main_equality(const KKSubmersion& s, const Point& b,
                                    const VerifyConfig& vc) {
  const GridSpec grid = vc.fiber_grid(s);
  const DifferentiationConfig& cfg = vc.diff;
  const MeasurePreservationCheck mp =
      check_measure_preserving(s, b, grid, cfg, vc.policy);
  if (mp.max_fiber_variance > vc.hypothesis_tolerance) {
    throw HypothesisUnmetError(
        "fiber transport is not measure-preserving at base point " +
        format_point(b) + " (fiberwise stddev " +
        std::to_string(mp.max_fiber_variance) + ")");
  }
  const bool unit = s.phi_m().is_unit();
  const WeightedManifold total = s.total_weighted();
  const WeightedManifold fiber = s.fiber_weighted(b);

  // Per node: (R^M_inf - R^F_inf + A + T) phi, (R^M_inf - R^F_inf) phi,
  // (A + T) phi, phi.
  const auto integrals = fiber_integrate_many(
      s, b,
      [&](const Point& p) {
        const SubmersionPointReport o = oneill_invariants(s, p, cfg);
        const double ph = s.phi_m().eval(p);
        const double rm = unit ? o.R_M : modified_scalar_inf(total, p, cfg);
        const double rf =
            unit ? o.R_F : modified_scalar_inf(fiber, s.fiber_part(p), cfg);
        const double at = o.A_norm2 + o.T_norm2;
        return std::vector<double>{(rm - rf + at) * ph, (rm - rf) * ph, at * ph,
                                   ph};
      },
      4, grid, vc.policy);

  const WeightedManifold base{s.base_metric(), pushforward_density(s, grid)};
  const double phib = base.phi.eval(b);
  const double rb_inf = modified_scalar_inf(base, b, cfg);
  const double lhs = phib * rb_inf;

  IdentityReport r;
  r.identity_id = IdentityId::MainEquality;
  r.sample_points = {b};
  r.tolerance = vc.tolerance;
  const double res = scaled(lhs - integrals[0], lhs);
  const double slack = rb_inf - integrals[1] / integrals[3];
  const double expected = integrals[2] / integrals[3];
  const double slack_res = scaled(slack - expected, rb_inf);
  r.residuals = {res, slack_res};
  r.series["lhs"] = {lhs};
  r.series["rhs"] = {integrals[0]};
  r.series["R_B_inf"] = {rb_inf};
  r.series["phi_B"] = {phib};
  r.series["main_equality_slack"] = {slack};
  r.series["weighted_avg_A_plus_T"] = {expected};
  r.series["inequality_slack_integral"] = {integrals[2]};
  r.finalize();
  if (integrals[2] < -vc.tolerance) {
    r.passed = false;
    r.notes = "negative |A|^2 + |T|^2 integral";
  }
  return r;
}

IdentityReport verify_theorem2_2(const KKSubmersion& s,
                                 const std::vector<Point>& base_points,
                                 const VerifyConfig& vc) {
  const GridSpec grid = vc.fiber_grid(s);
  const DifferentiationConfig& cfg = vc.diff;
  const int q = s.fiber_dim();
  if (!s.phi_m().is_unit()) {
    for (const Point& b : base_points) {
      for (const Point& y : periodic_grid_nodes(s.fiber_domain(), grid)) {
        if (std::abs(s.phi_m().eval(s.join(b, y)) - 1.0) > 1e-14) {
          throw ParameterError(
              "theorem2-2 requires the unit total-space density");
        }
      }
    }
  }
  const WeightedManifold base{s.base_metric(), pushforward_density(s, grid)};

  IdentityReport r;
  r.identity_id = IdentityId::Theorem2_2;
  r.sample_points = base_points;
  r.tolerance = vc.tolerance;
  std::vector<double> violation, equality, cs_violation;
  for (const Point& b : base_points) {
    // Per node: R_M - R_F, |A|^2 + |T|^2 - |N|^2/q, 1; plus the pointwise
    // Cauchy-Schwarz slack (not integrated, min taken below).
    const auto nodes = periodic_grid_nodes(s.fiber_domain(), grid);
    const auto rows = parallel_map<SubmersionPointReport>(
        nodes.size(),
        [&](std::size_t k) {
          return oneill_invariants(s, s.join(b, nodes[k]), cfg);
        },
        vc.policy);
    std::vector<double> w_rmf(nodes.size()), w_ex(nodes.size()),
        w_vol(nodes.size());
    double min_cs = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double dvol =
          std::sqrt(s.g_fiber(s.join(b, nodes[k])).determinant());
      w_rmf[k] = (rows[k].R_M - rows[k].R_F) * dvol;
      w_ex[k] = (rows[k].A_norm2 + rows[k].T_norm2 - rows[k].N_norm2 / q) * dvol;
      w_vol[k] = dvol;
      min_cs = std::min(min_cs, rows[k].cauchy_schwarz_slack);
    }
    const double vol = pairwise_sum(w_vol);
    const double lhs = pairwise_sum(w_rmf) / vol;
    const double expected = pairwise_sum(w_ex) / vol;
    const double rbq = modified_scalar_q(base, static_cast<double>(q), b, cfg);
    const double slack = rbq - lhs;
    violation.push_back(scaled(std::max(0.0, -slack), rbq));
    equality.push_back(scaled(slack - expected, rbq));
    cs_violation.push_back(
        std::max(0.0, -min_cs - vc.cauchy_schwarz_tolerance));
    r.series["R_B_q"].push_back(rbq);
    r.series["avg_R_M_minus_R_F"].push_back(lhs);
    r.series["slack"].push_back(slack);
    r.series["expected_slack"].push_back(expected);
    r.series["min_cauchy_schwarz_slack"].push_back(min_cs);
  }
  r.series["equality_residual"] = equality;
  append(r.residuals, violation);
  append(r.residuals, equality);
  append(r.residuals, cs_violation);
  r.finalize();
  return r;
}

namespace {

// Flow of the horizontal lift of the constant base field X:
// x' = X, y' = -A(x, y) X, classical RK4.
Point flow_horizontal_lift(const KKSubmersion& s, const Point& start,
                           const Vector& direction, double t, int substeps) {
  const int n = s.base_dim();
  const int q = s.fiber_dim();
  auto rhs = [&](const Point& p) {
    Vector v(n + q);
    v.head(n) = direction;
    v.tail(q) = -s.connection(p) * direction;
    return v;
  };
  Point p = start;
  const double dt = t / substeps;
  for (int k = 0; k < substeps; ++k) {
    const Vector k1 = rhs(p);
    const Vector k2 = rhs(p + 0.5 * dt * k1);
    const Vector k3 = rhs(p + 0.5 * dt * k2);
    const Vector k4 = rhs(p + dt * k3);
    p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

}  // namespace

IdentityReport verify_lie_derivative_fiber_volume(const KKSubmersion& s,
                                                  const Point& b,
                                                  const Vector& direction,
                                                  const VerifyConfig& vc) {
  const int n = s.base_dim();
  const int q = s.fiber_dim();
  if (direction.size() != n) {
    throw ParameterError("flow direction must be a base vector");
  }
  const double t = vc.lie_t_step;
  if (!(t > 0.0)) throw ParameterError("flow time step must be positive");
  const ChartDomain& base = s.base_domain();
  for (int a = 0; a < n; ++a) {
    if (base.periodic(a)) continue;
    const double reach = 2.0 * t * std::abs(direction[a]);
    if (b[a] - reach <= base.bounds(a).lo || b[a] + reach >= base.bounds(a).hi) {
      throw StepSizeError("horizontal flow from " + format_point(b) +
                          " leaves the base chart for t = " + std::to_string(t));
    }
  }
  const DifferentiationConfig& cfg = vc.diff;
  const GridSpec grid = vc.fiber_grid(s);
  const auto nodes = periodic_grid_nodes(s.fiber_domain(), grid);
  const Vector dy = axis_steps(s.fiber_domain(), cfg.step);
  constexpr int kSubsteps = 8;
  const std::array<double, 4> times{-2.0 * t, -t, t, 2.0 * t};

  struct NodeResult {
    double lhs = 0.0;
    double rhs = 0.0;
  };
  const auto rows = parallel_map<NodeResult>(
      nodes.size(),
      [&](std::size_t k) {
        const Point p0 = s.join(b, nodes[k]);
        std::array<double, 4> density{};
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
          auto end_fiber = [&](const Point& y0) {
            return Vector(s.fiber_part(flow_horizontal_lift(
                s, s.join(b, y0), direction, times[ti], kSubsteps)));
          };
          Matrix jac(q, q);
          for (int j = 0; j < q; ++j) {
            jac.col(j) = stencil::first_derivative(end_fiber, nodes[k], j,
                                                   dy[j], cfg.stencil_order);
          }
          const Point pt =
              flow_horizontal_lift(s, p0, direction, times[ti], kSubsteps);
          density[ti] =
              std::sqrt(s.g_fiber(pt).determinant()) * jac.determinant();
        }
        const double ddt =
            (density[0] - 8.0 * density[1] + 8.0 * density[2] - density[3]) /
            (12.0 * t);
        const FiberGeometry fg = fiber_geometry(s, p0, cfg);
        Vector lift(n + q);
        lift.head(n) = direction;
        lift.tail(q) = -s.connection(p0) * direction;
        const double dvol = std::sqrt(s.g_fiber(p0).determinant());
        return NodeResult{ddt, -lift.dot(fg.g * fg.mean_curvature) * dvol};
      },
      vc.policy);

  IdentityReport r;
  r.identity_id = IdentityId::LieFiberVolume;
  r.sample_points = {b};
  r.tolerance = vc.tolerance;
  for (const auto& row : rows) {
    r.residuals.push_back(scaled(row.lhs - row.rhs, row.rhs));
    r.series["flow_derivative"].push_back(row.lhs);
    r.series["minus_lift_dot_N"].push_back(row.rhs);
  }
  r.finalize();
  return r;
}

}  // namespace mmcurv
