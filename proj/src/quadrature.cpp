#include "mmcurv/quadrature.hpp"

#include "mmcurv/errors.hpp"

namespace mmcurv {

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

GridSpec uniform_grid(int dim, int nodes) { return GridSpec(dim, nodes); }

namespace {

void check_grid(const ChartDomain& domain, const GridSpec& grid) {
  if (static_cast<int>(grid.size()) != domain.dim()) {
    throw ParameterError("quadrature grid has " + std::to_string(grid.size()) +
                         " axes, chart has " + std::to_string(domain.dim()));
  }
  for (int g : grid) {
    if (g < 1) throw ParameterError("quadrature grid needs >= 1 node per axis");
  }
}

}  // namespace

std::vector<Point> periodic_grid_nodes(const ChartDomain& domain,
                                       const GridSpec& grid) {
  check_grid(domain, grid);
  const int n = domain.dim();
  std::size_t total = 1;
  for (int g : grid) total *= static_cast<std::size_t>(g);
  std::vector<Point> nodes;
  nodes.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    Point p(n);
    for (int a = 0; a < n; ++a) {
      const auto& b = domain.bounds(a);
      p[a] = b.lo + b.length() * static_cast<double>(idx[a]) / grid[a];
    }
    nodes.push_back(std::move(p));
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < grid[a]) break;
      idx[a] = 0;
    }
  }
  return nodes;
}

double periodic_cell_weight(const ChartDomain& domain, const GridSpec& grid) {
  check_grid(domain, grid);
  double w = 1.0;
  for (int a = 0; a < domain.dim(); ++a) w *= domain.bounds(a).length() / grid[a];
  return w;
}

double periodic_trapezoid(const ChartDomain& domain, const GridSpec& grid,
                          const ScalarFn& fn, ExecPolicy policy) {
  if (!domain.all_periodic()) {
    throw UnsupportedDomainError(
        "periodic quadrature requires every chart axis to be periodic");
  }
  const auto nodes = periodic_grid_nodes(domain, grid);
  const auto values = parallel_map<double>(
      nodes.size(), [&](std::size_t i) { return fn(nodes[i]); }, policy);
  return periodic_cell_weight(domain, grid) * pairwise_sum(values);
}

}  // namespace mmcurv
