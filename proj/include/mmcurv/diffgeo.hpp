#pragma once

#include "mmcurv/fields.hpp"
#include "mmcurv/stencil.hpp"

#include <vector>

namespace mmcurv {

/// Dense rank-3 array indexed (k, i, j); used for Christoffel symbols
/// Gamma^k_{ij}.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), d_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int k, int i, int j) { return d_[(k * n_ + i) * n_ + j]; }
  double operator()(int k, int i, int j) const {
    return d_[(k * n_ + i) * n_ + j];
  }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

/// Dense rank-4 array indexed (a, b, c, d).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n)
      : n_(n), d_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) {
    return d_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return d_[((a * n_ + b) * n_ + c) * n_ + d];
  }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

/// Metric with its first and second coordinate derivatives at one point.
struct MetricJet {
  Matrix g;
  Matrix ginv;
  std::vector<Matrix> dg;   // dg[m] = d_m g
  std::vector<Matrix> d2g;  // d2g[m * n + l] = d_m d_l g (empty if not needed)
};

MetricJet metric_jet(const MetricField& m, const Point& x,
                     const DifferentiationConfig& cfg, bool second_order);

/// Curvature data at a point. Conventions: R(X,Y)Z = nabla_X nabla_Y Z -
/// nabla_Y nabla_X Z - nabla_[X,Y] Z, riemann_lowered(a,b,c,d) =
/// <R(d_c, d_d) d_b, d_a>, ricci(b,d) = R^a_{bad}. The round unit sphere
/// has scalar = +2.
struct CurvatureAtPoint {
  Tensor3 christoffel;
  Tensor4 riemann_lowered;
  Matrix ricci;
  double scalar = 0.0;
};

Tensor3 christoffel(const MetricField& m, const Point& x,
                    const DifferentiationConfig& cfg);
Tensor3 christoffel_from_jet(const MetricJet& jet);

CurvatureAtPoint curvature_at(const MetricField& m, const Point& x,
                              const DifferentiationConfig& cfg);

/// Raised-index gradient and its squared norm.
struct Gradient {
  Vector vec;
  double norm2 = 0.0;
};

/// Coordinate partials d_i f with the configured stencil.
Vector partials(const ScalarField& f, const Point& x,
                const DifferentiationConfig& cfg);

Gradient gradient(const MetricField& m, const ScalarField& f, const Point& x,
                  const DifferentiationConfig& cfg);
Matrix hessian(const MetricField& m, const ScalarField& f, const Point& x,
               const DifferentiationConfig& cfg);
/// g^{ij} Hess_ij f. Euclidean laplacian of |x|^2/2 is +dim.
double laplacian(const MetricField& m, const ScalarField& f, const Point& x,
                 const DifferentiationConfig& cfg);

/// Largest violation of the algebraic Riemann symmetries and the first
/// Bianchi identity.
double riemann_symmetry_defect(const CurvatureAtPoint& c);
double bianchi_defect(const CurvatureAtPoint& c);

}  // namespace mmcurv
