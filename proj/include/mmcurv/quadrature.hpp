#pragma once

#include "mmcurv/chart.hpp"
#include "mmcurv/fields.hpp"
#include "mmcurv/parallel.hpp"

#include <span>
#include <vector>

namespace mmcurv {

/// Pairwise (cascade) summation; fixed association order so results do not
/// depend on how the terms were produced.
double pairwise_sum(std::span<const double> values);

/// Nodes per axis for a tensor-product periodic trapezoidal rule.
using GridSpec = std::vector<int>;

/// Expands a single count to one count per axis.
GridSpec uniform_grid(int dim, int nodes);

/// Tensor-product nodes lo + k * L / G, last axis fastest.
std::vector<Point> periodic_grid_nodes(const ChartDomain& domain,
                                       const GridSpec& grid);

/// Product of per-axis node spacings.
double periodic_cell_weight(const ChartDomain& domain, const GridSpec& grid);

/// Periodic trapezoidal rule of fn over the full box. Every axis of the
/// domain must be periodic (UnsupportedDomainError otherwise).
double periodic_trapezoid(const ChartDomain& domain, const GridSpec& grid,
                          const ScalarFn& fn,
                          ExecPolicy policy = default_policy());

}  // namespace mmcurv
