#pragma once

#include "mmcurv/diffgeo.hpp"
#include "mmcurv/quadrature.hpp"

#include <optional>

namespace mmcurv {

/// Smooth metric-measure space (M, phi dvol).
struct WeightedManifold {
  MetricField metric;
  DensityField phi;

  static WeightedManifold unweighted(MetricField metric);
};

/// Ingredients shared by the modified scalar curvatures at one point.
struct WeightTerms {
  double scalar = 0.0;        // R
  double phi = 1.0;
  double laplacian_phi = 0.0;  // nabla^2 phi
  double grad_phi_sq = 0.0;    // |nabla phi|^2
};

WeightTerms weight_terms(const WeightedManifold& w, const Point& x,
                         const DifferentiationConfig& cfg);

/// R - 2 lap(phi)/phi + |grad phi|^2/phi^2
double modified_scalar_inf(const WeightedManifold& w, const Point& x,
                           const DifferentiationConfig& cfg);

/// R - 2 lap(phi)/phi + (1 - 1/q) |grad phi|^2/phi^2, q > 0.
double modified_scalar_q(const WeightedManifold& w, double q, const Point& x,
                         const DifferentiationConfig& cfg);

/// R - 2 lap(ln phi) - (1 + 1/q) |grad ln phi|^2. Algebraically equal to
/// modified_scalar_q; computed from ln phi so it is an independent route.
double log_form_scalar_q(const WeightedManifold& w, double q, const Point& x,
                         const DifferentiationConfig& cfg);

struct ModifiedScalarReport {
  Point point;
  double scalar = 0.0;
  double r_inf = 0.0;
  std::optional<double> q;  // absent means q = infinity
  std::optional<double> r_q;
};

ModifiedScalarReport modified_scalar_report(const WeightedManifold& w,
                                            std::optional<double> q,
                                            const Point& x,
                                            const DifferentiationConfig& cfg);

struct IntegralResult {
  double integral = 0.0;
  double volume = 0.0;
  double mean() const { return integral / volume; }
};

/// Periodic trapezoidal rule of field * sqrt(det g) over a fully periodic
/// chart.
IntegralResult integrate_scalar(const WeightedManifold& w, const ScalarFn& field,
                                const GridSpec& grid,
                                ExecPolicy policy = default_policy());

struct MeanScalarChain {
  double mean_Rq = 0.0;
  double mean_R = 0.0;
  double volume = 0.0;
};

/// Riemannian means of R_q and R on a periodic chart; expected mean_Rq <=
/// mean_R. q absent uses R_inf.
MeanScalarChain mean_scalar_chain(const WeightedManifold& w,
                                  std::optional<double> q, const GridSpec& grid,
                                  const DifferentiationConfig& cfg,
                                  ExecPolicy policy = default_policy());

}  // namespace mmcurv
