#pragma once

#include "mmcurv/chart.hpp"

#include <functional>

namespace mmcurv {

using MatrixFn = std::function<Matrix(const Point&)>;
using ScalarFn = std::function<double(const Point&)>;

/// Riemannian metric given as a closed-form callable on a chart.
///
/// `eval` symmetrizes the callable's output and rejects it when the
/// asymmetry exceeds 1e-12 (relative to the largest entry) or when a Cholesky
/// factorization fails. Both are reported as DegenerateMetricError.
class MetricField {
 public:
  MetricField() = default;
  MetricField(ChartDomain domain, MatrixFn fn);

  const ChartDomain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  Matrix eval(const Point& x) const;
  Matrix operator()(const Point& x) const { return eval(x); }

 private:
  ChartDomain domain_;
  MatrixFn fn_;
};

/// Smooth real function on a chart.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(ChartDomain domain, ScalarFn fn);

  const ChartDomain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  double eval(const Point& x) const { return fn_(x); }
  double operator()(const Point& x) const { return fn_(x); }
  const ScalarFn& fn() const { return fn_; }

  static ScalarField constant(ChartDomain domain, double value);

 private:
  ChartDomain domain_;
  ScalarFn fn_;
};

/// Positive weight phi. Evaluation throws DensityError on phi <= 0.
class DensityField {
 public:
  DensityField() = default;
  DensityField(ChartDomain domain, ScalarFn fn, bool is_unit = false);

  static DensityField unit(ChartDomain domain);

  const ChartDomain& domain() const { return domain_; }
  double eval(const Point& x) const;
  double operator()(const Point& x) const { return eval(x); }
  /// True when the density is known to be identically 1.
  bool is_unit() const { return is_unit_; }
  ScalarField as_scalar() const;

 private:
  ChartDomain domain_;
  ScalarFn fn_;
  bool is_unit_ = false;
};

}  // namespace mmcurv
