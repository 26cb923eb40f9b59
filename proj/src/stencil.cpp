#include "mmcurv/stencil.hpp"

#include "mmcurv/errors.hpp"

namespace mmcurv {

void DifferentiationConfig::validate() const {
  if (!(step > 0.0 && step <= 0.1)) {
    throw ParameterError("step must lie in (0, 0.1]");
  }
  if (!(nested_step > 0.0 && nested_step <= 0.1)) {
    throw ParameterError("nested_step must lie in (0, 0.1]");
  }
  if (stencil_order != 2 && stencil_order != 4) {
    throw ParameterError("stencil_order must be 2 or 4");
  }
}

Vector axis_steps(const ChartDomain& domain, double rel) {
  Vector h(domain.dim());
  for (int a = 0; a < domain.dim(); ++a) h[a] = rel * domain.bounds(a).length();
  return h;
}

namespace stencil {

namespace {
constexpr double kFirst2[] = {-1.0, 0.0, 1.0};
constexpr double kFirst4[] = {1.0, -8.0, 0.0, 8.0, -1.0};
constexpr double kSecond2[] = {1.0, -2.0, 1.0};
constexpr double kSecond4[] = {-1.0, 16.0, -30.0, 16.0, -1.0};
}  // namespace

Weights first(int order) {
  if (order == 2) return {kFirst2, 1, 2.0};
  if (order == 4) return {kFirst4, 2, 12.0};
  throw ParameterError("stencil_order must be 2 or 4");
}

Weights second(int order) {
  if (order == 2) return {kSecond2, 1, 1.0};
  if (order == 4) return {kSecond4, 2, 12.0};
  throw ParameterError("stencil_order must be 2 or 4");
}

}  // namespace stencil
}  // namespace mmcurv
