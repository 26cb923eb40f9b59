#include "mmcurv/weighted.hpp"

#include "mmcurv/errors.hpp"

#include <cmath>

namespace mmcurv {

WeightedManifold WeightedManifold::unweighted(MetricField metric) {
  ChartDomain dom = metric.domain();
  return {std::move(metric), DensityField::unit(std::move(dom))};
}

namespace {

void require_positive_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw ParameterError("q must be a positive finite number (got " +
                         std::to_string(q) + ")");
  }
}

// Throws DensityError if phi is non-positive anywhere on the stencil.
void check_density_on_stencil(const WeightedManifold& w, const Point& x,
                              const DifferentiationConfig& cfg) {
  const Vector h = axis_steps(w.phi.domain(), cfg.step);
  const int half = stencil_half_width(cfg.stencil_order);
  Point p = x;
  for (int a = 0; a < x.size(); ++a) {
    for (int k = -half; k <= half; ++k) {
      p[a] = x[a] + k * h[a];
      w.phi.eval(p);
    }
    p[a] = x[a];
  }
}

}  // namespace

WeightTerms weight_terms(const WeightedManifold& w, const Point& x,
                         const DifferentiationConfig& cfg) {
  WeightTerms t;
  t.scalar = curvature_at(w.metric, x, cfg).scalar;
  if (w.phi.is_unit()) return t;
  check_density_on_stencil(w, x, cfg);
  const ScalarField phi = w.phi.as_scalar();
  t.phi = w.phi.eval(x);
  t.laplacian_phi = laplacian(w.metric, phi, x, cfg);
  t.grad_phi_sq = gradient(w.metric, phi, x, cfg).norm2;
  return t;
}

double modified_scalar_inf(const WeightedManifold& w, const Point& x,
                           const DifferentiationConfig& cfg) {
  const WeightTerms t = weight_terms(w, x, cfg);
  return t.scalar - 2.0 * t.laplacian_phi / t.phi +
         t.grad_phi_sq / (t.phi * t.phi);
}

double modified_scalar_q(const WeightedManifold& w, double q, const Point& x,
                         const DifferentiationConfig& cfg) {
  require_positive_q(q);
  const WeightTerms t = weight_terms(w, x, cfg);
  return t.scalar - 2.0 * t.laplacian_phi / t.phi +
         (1.0 - 1.0 / q) * t.grad_phi_sq / (t.phi * t.phi);
}

double log_form_scalar_q(const WeightedManifold& w, double q, const Point& x,
                         const DifferentiationConfig& cfg) {
  require_positive_q(q);
  const double scalar = curvature_at(w.metric, x, cfg).scalar;
  if (w.phi.is_unit()) return scalar;
  check_density_on_stencil(w, x, cfg);
  const DensityField phi = w.phi;
  const ScalarField log_phi(phi.domain(), [phi](const Point& p) {
    return std::log(phi.eval(p));
  });
  const double lap = laplacian(w.metric, log_phi, x, cfg);
  const double g2 = gradient(w.metric, log_phi, x, cfg).norm2;
  return scalar - 2.0 * lap - (1.0 + 1.0 / q) * g2;
}

ModifiedScalarReport modified_scalar_report(const WeightedManifold& w,
                                            std::optional<double> q,
                                            const Point& x,
                                            const DifferentiationConfig& cfg) {
  if (q) require_positive_q(*q);
  const WeightTerms t = weight_terms(w, x, cfg);
  ModifiedScalarReport r;
  r.point = x;
  r.scalar = t.scalar;
  const double lap_term = -2.0 * t.laplacian_phi / t.phi;
  const double grad_term = t.grad_phi_sq / (t.phi * t.phi);
  r.r_inf = t.scalar + lap_term + grad_term;
  if (q) {
    r.q = q;
    r.r_q = t.scalar + lap_term + (1.0 - 1.0 / *q) * grad_term;
  }
  return r;
}

IntegralResult integrate_scalar(const WeightedManifold& w, const ScalarFn& field,
                                const GridSpec& grid, ExecPolicy policy) {
  const ChartDomain& dom = w.metric.domain();
  if (!dom.all_periodic()) {
    throw UnsupportedDomainError(
        "global integrals require a chart with every axis periodic");
  }
  const auto nodes = periodic_grid_nodes(dom, grid);
  struct Pair {
    double f = 0.0;
    double vol = 0.0;
  };
  const auto vals = parallel_map<Pair>(
      nodes.size(),
      [&](std::size_t i) {
        const double sq = std::sqrt(w.metric.eval(nodes[i]).determinant());
        return Pair{field(nodes[i]) * sq, sq};
      },
      policy);
  std::vector<double> f(vals.size()), v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    f[i] = vals[i].f;
    v[i] = vals[i].vol;
  }
  const double cell = periodic_cell_weight(dom, grid);
  return {cell * pairwise_sum(f), cell * pairwise_sum(v)};
}

MeanScalarChain mean_scalar_chain(const WeightedManifold& w,
                                  std::optional<double> q, const GridSpec& grid,
                                  const DifferentiationConfig& cfg,
                                  ExecPolicy policy) {
  if (q) require_positive_q(*q);
  const ChartDomain& dom = w.metric.domain();
  if (!dom.all_periodic()) {
    throw UnsupportedDomainError(
        "mean scalar curvature requires a chart with every axis periodic");
  }
  const auto nodes = periodic_grid_nodes(dom, grid);
  const auto reports = parallel_map<ModifiedScalarReport>(
      nodes.size(),
      [&](std::size_t i) { return modified_scalar_report(w, q, nodes[i], cfg); },
      policy);
  std::vector<double> rq(nodes.size()), r(nodes.size()), vol(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double sq = std::sqrt(w.metric.eval(nodes[i]).determinant());
    rq[i] = (q ? *reports[i].r_q : reports[i].r_inf) * sq;
    r[i] = reports[i].scalar * sq;
    vol[i] = sq;
  }
  MeanScalarChain out;
  out.volume = pairwise_sum(vol);
  out.mean_Rq = pairwise_sum(rq) / out.volume;
  out.mean_R = pairwise_sum(r) / out.volume;
  out.volume *= periodic_cell_weight(dom, grid);
  return out;
}

}  // namespace mmcurv
