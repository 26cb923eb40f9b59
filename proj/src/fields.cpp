#include "mmcurv/fields.hpp"

#include "mmcurv/errors.hpp"

#include <cmath>

namespace mmcurv {

MetricField::MetricField(ChartDomain domain, MatrixFn fn)
    : domain_(std::move(domain)), fn_(std::move(fn)) {}

Matrix MetricField::eval(const Point& x) const {
  Matrix g = fn_(x);
  const int n = dim();
  if (g.rows() != n || g.cols() != n) {
    throw DegenerateMetricError("metric at " + format_point(x) +
                                " has wrong shape");
  }
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12 * scale)) {
    throw DegenerateMetricError("metric at " + format_point(x) +
                                " is not symmetric");
  }
  Matrix s = 0.5 * (g + g.transpose());
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success || !s.allFinite()) {
    throw DegenerateMetricError("metric at " + format_point(x) +
                                " is not positive definite");
  }
  return s;
}

ScalarField::ScalarField(ChartDomain domain, ScalarFn fn)
    : domain_(std::move(domain)), fn_(std::move(fn)) {}

ScalarField ScalarField::constant(ChartDomain domain, double value) {
  return ScalarField(std::move(domain), [value](const Point&) { return value; });
}

DensityField::DensityField(ChartDomain domain, ScalarFn fn, bool is_unit)
    : domain_(std::move(domain)), fn_(std::move(fn)), is_unit_(is_unit) {}

DensityField DensityField::unit(ChartDomain domain) {
  return DensityField(std::move(domain), [](const Point&) { return 1.0; },
                      true);
}

double DensityField::eval(const Point& x) const {
  const double v = fn_(x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DensityError("density is not positive at " + format_point(x));
  }
  return v;
}

ScalarField DensityField::as_scalar() const {
  DensityField self = *this;
  return ScalarField(domain_, [self](const Point& x) { return self.eval(x); });
}

}  // namespace mmcurv
