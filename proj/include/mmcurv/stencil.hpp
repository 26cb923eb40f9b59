#pragma once

#include "mmcurv/chart.hpp"

#include <type_traits>
#include <utility>

namespace mmcurv {

/// Finite-difference settings. Steps are relative to each axis length.
struct DifferentiationConfig {
  double step = 1e-4;
  int stencil_order = 4;
  /// Step for differentiating derived quantities (mean curvature field, ...).
  double nested_step = 1e-3;

  /// Throws ParameterError unless both steps are in (0, 0.1] and the order
  /// is 2 or 4.
  void validate() const;
};

/// Absolute per-axis steps: rel * axis length.
Vector axis_steps(const ChartDomain& domain, double rel);

/// Half-width of the central stencil in units of h.
inline int stencil_half_width(int order) { return order / 2; }

namespace stencil {

// Central-difference weights, offsets -w..w, h factored out.
struct Weights {
  const double* c;
  int half;
  double denom;
};

Weights first(int order);
Weights second(int order);

template <class F>
using value_t = std::decay_t<std::invoke_result_t<F, const Point&>>;

template <class R>
R zero_like(const R& v) {
  if constexpr (std::is_arithmetic_v<R>) {
    return R(0);
  } else {
    return R::Zero(v.rows(), v.cols());
  }
}

/// d/dx_axis f(x). Works for scalar- and Eigen-valued f.
template <class F>
value_t<F> first_derivative(F&& f, const Point& x, int axis, double h,
                            int order) {
  const Weights w = first(order);
  Point p = x;
  value_t<F> acc{};
  bool init = false;
  for (int k = -w.half; k <= w.half; ++k) {
    const double c = w.c[k + w.half];
    if (c == 0.0) continue;
    p[axis] = x[axis] + k * h;
    value_t<F> v = f(p);
    if (!init) {
      acc = zero_like(v);
      init = true;
    }
    acc += c * v;
  }
  return acc / (w.denom * h);
}

/// d^2/dx_axis^2 f(x).
template <class F>
value_t<F> second_derivative(F&& f, const Point& x, int axis, double h,
                             int order) {
  const Weights w = second(order);
  Point p = x;
  value_t<F> acc{};
  bool init = false;
  for (int k = -w.half; k <= w.half; ++k) {
    const double c = w.c[k + w.half];
    p[axis] = x[axis] + k * h;
    value_t<F> v = f(p);
    if (!init) {
      acc = zero_like(v);
      init = true;
    }
    acc += c * v;
  }
  return acc / (w.denom * h * h);
}

/// d^2/dx_a dx_b f(x), a != b, as a tensor product of first-derivative
/// stencils.
template <class F>
value_t<F> mixed_derivative(F&& f, const Point& x, int a, int b, double ha,
                            double hb, int order) {
  const Weights w = first(order);
  Point p = x;
  value_t<F> acc{};
  bool init = false;
  for (int i = -w.half; i <= w.half; ++i) {
    const double ci = w.c[i + w.half];
    if (ci == 0.0) continue;
    for (int j = -w.half; j <= w.half; ++j) {
      const double cj = w.c[j + w.half];
      if (cj == 0.0) continue;
      p[a] = x[a] + i * ha;
      p[b] = x[b] + j * hb;
      value_t<F> v = f(p);
      if (!init) {
        acc = zero_like(v);
        init = true;
      }
      acc += (ci * cj) * v;
    }
  }
  return acc / (w.denom * w.denom * ha * hb);
}

}  // namespace stencil
}  // namespace mmcurv
