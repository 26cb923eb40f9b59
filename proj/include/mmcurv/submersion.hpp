#pragma once

#include "mmcurv/diffgeo.hpp"
#include "mmcurv/quadrature.hpp"
#include "mmcurv/weighted.hpp"

#include <vector>

namespace mmcurv {

/// Riemannian submersion in connection (Kaluza-Klein) form over a product
/// chart (x, y), x in the base chart and y in a torus fiber chart:
///
///   g = g_B(x)_ab dx^a dx^b + g_F(x,y)_ij (dy^i + A^i_a dx^a)(dy^j + A^j_b dx^b)
///
/// The projection (x, y) -> x is a Riemannian submersion onto (base, g_B) by
/// construction. Fiber and connection callables take the total point.
class KKSubmersion {
 public:
  KKSubmersion() = default;
  /// phi_m defaults to the unit density when empty.
  KKSubmersion(ChartDomain base, ChartDomain fiber, MatrixFn g_base,
               MatrixFn g_fiber, MatrixFn connection,
               ScalarFn phi_m = nullptr);

  int base_dim() const { return base_.dim(); }
  int fiber_dim() const { return fiber_.dim(); }
  int total_dim() const { return total_.dim(); }
  const ChartDomain& base_domain() const { return base_; }
  const ChartDomain& fiber_domain() const { return fiber_; }
  const ChartDomain& total_domain() const { return total_; }

  Point join(const Point& x, const Point& y) const;
  Point base_part(const Point& p) const { return p.head(base_dim()); }
  Point fiber_part(const Point& p) const { return p.tail(fiber_dim()); }

  Matrix g_base(const Point& x) const;
  Matrix g_fiber(const Point& p) const;
  /// q x n matrix A^i_a at a total point.
  Matrix connection(const Point& p) const;
  const MatrixFn& connection_fn() const { return connection_; }

  MetricField base_metric() const;
  /// Fiber metric at fixed base point x, as a field over the fiber chart.
  MetricField fiber_metric(const Point& x) const;
  MetricField total_metric() const;

  const DensityField& phi_m() const { return phi_m_; }
  /// phi_M restricted to the fiber over x.
  DensityField phi_fiber(const Point& x) const;

  WeightedManifold total_weighted() const { return {total_metric(), phi_m_}; }
  WeightedManifold fiber_weighted(const Point& x) const {
    return {fiber_metric(x), phi_fiber(x)};
  }

 private:
  ChartDomain base_;
  ChartDomain fiber_;
  ChartDomain total_;
  MatrixFn g_base_;
  MatrixFn g_fiber_;
  MatrixFn connection_;
  DensityField phi_m_;
};

/// Block-assembled total metric of dimension n + q.
MetricField assemble_total_metric(const KKSubmersion& s);

/// Orthonormal frame adapted to the horizontal/vertical splitting, vectors
/// stored as columns in total coordinates.
struct AdaptedFrame {
  Point point;
  Matrix horizontal;  // (n+q) x n, column a projects to base frame vector a
  Matrix vertical;    // (n+q) x q, zero base components
  Matrix base_frame;  // n x n, orthonormal frame of g_B at x
};

/// Horizontal lifts of the Gram-Schmidt frame of g_B and the Gram-Schmidt
/// frame of g_F. Optional orthogonal matrices rotate each block.
AdaptedFrame adapted_frame(const KKSubmersion& s, const Point& p,
                           const Matrix& rotate_horizontal = Matrix(),
                           const Matrix& rotate_vertical = Matrix());

/// Geometry of the vertical distribution at a point: frame, Christoffels of
/// the total metric, mean curvature vector N = sum_i (nabla_{u_i} u_i)^hor
/// and |T|^2 = sum_ij |(nabla_{u_i} u_j)^hor|^2.
struct FiberGeometry {
  AdaptedFrame frame;
  Matrix g;
  Tensor3 gamma;
  Vector mean_curvature;
  double T_norm2 = 0.0;
};

FiberGeometry fiber_geometry(const KKSubmersion& s, const Point& p,
                             const DifferentiationConfig& cfg,
                             const Matrix& rotate_horizontal = Matrix(),
                             const Matrix& rotate_vertical = Matrix());

/// N as a field, in total coordinates.
Vector mean_curvature_vector(const KKSubmersion& s, const Point& p,
                             const DifferentiationConfig& cfg);

/// -sum_a <nabla_{e_a} N, e_a>, with N differentiated by nested stencils of
/// size cfg.nested_step.
double check_delta_N(const KKSubmersion& s, const FiberGeometry& fg,
                     const DifferentiationConfig& cfg);

struct SubmersionPointReport {
  Point point;
  double R_M = 0.0;
  double R_F = 0.0;
  double R_B = 0.0;
  double A_norm2 = 0.0;
  double T_norm2 = 0.0;
  double N_norm2 = 0.0;
  double check_delta_N = 0.0;
  Vector N_vector;
  /// R_M - (R_B + R_F - |A|^2 - |T|^2 - |N|^2 - 2 checkdelta N)
  double residual_3_1 = 0.0;
  /// |T|^2 - |N|^2 / q, nonnegative by Cauchy-Schwarz.
  double cauchy_schwarz_slack = 0.0;
  /// max |A_{e_a} e_b + A_{e_b} e_a|
  double a_antisymmetry = 0.0;
};

/// Throws ConsistencyError when A fails antisymmetry beyond
/// max(1e-8, 1e3 * step^order) relative to max(1, |A|).
SubmersionPointReport oneill_invariants(
    const KKSubmersion& s, const Point& p, const DifferentiationConfig& cfg,
    const Matrix& rotate_horizontal = Matrix(),
    const Matrix& rotate_vertical = Matrix());

/// Periodic trapezoidal rule of integrand(x, y) dvol_F over the fiber at x.
double fiber_integrate(const KKSubmersion& s, const Point& x,
                       const ScalarFn& integrand, const GridSpec& grid,
                       ExecPolicy policy = default_policy());

/// Several integrands over the same fiber in one sweep of the nodes.
std::vector<double> fiber_integrate_many(
    const KKSubmersion& s, const Point& x,
    const std::function<std::vector<double>(const Point&)>& integrands,
    std::size_t count, const GridSpec& grid,
    ExecPolicy policy = default_policy());

/// phi_B(x) = integral over F_x of phi_M dvol_F.
DensityField pushforward_density(const KKSubmersion& s, const GridSpec& grid);

struct MeasurePreservationCheck {
  /// Max over base directions of the fiberwise standard deviation of
  /// h_a = (e_a phi_M)/phi_M - <e_a, N>.
  double max_fiber_variance = 0.0;
  std::vector<double> per_direction;
  std::vector<double> per_direction_mean;
};

MeasurePreservationCheck check_measure_preserving(
    const KKSubmersion& s, const Point& x, const GridSpec& grid,
    const DifferentiationConfig& cfg, ExecPolicy policy = default_policy());

/// Terms of the Laplacian splitting and gradient Pythagoras at a point.
struct LaplacianSplit {
  double laplacian_M = 0.0;
  double laplacian_hor = 0.0;
  double laplacian_F = 0.0;
  double grad_hor_dot_N = 0.0;
  double grad_M_sq = 0.0;
  double grad_hor_sq = 0.0;
  double grad_F_sq = 0.0;
  double split_residual() const {
    return laplacian_M - (laplacian_hor + laplacian_F - grad_hor_dot_N);
  }
  double pythagoras_residual() const {
    return grad_M_sq - (grad_hor_sq + grad_F_sq);
  }
};

LaplacianSplit laplacian_split(const KKSubmersion& s, const ScalarFn& f,
                               const Point& p, const DifferentiationConfig& cfg);

}  // namespace mmcurv
