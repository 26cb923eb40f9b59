#include "mmcurv/chart.hpp"

#include "mmcurv/errors.hpp"

#include <sstream>

namespace mmcurv {

ChartDomain::ChartDomain(std::vector<Interval> bounds,
                         std::vector<bool> periodic,
                         std::vector<std::string> names)
    : bounds_(std::move(bounds)),
      periodic_(std::move(periodic)),
      names_(std::move(names)) {
  if (bounds_.empty()) {
    throw ParameterError("chart dimension must be at least 1");
  }
  if (periodic_.size() != bounds_.size()) {
    throw ParameterError("chart periodic flags do not match dimension");
  }
  for (const auto& b : bounds_) {
    if (!(b.hi > b.lo)) {
      throw ParameterError("chart interval must have positive length");
    }
  }
  if (names_.empty()) {
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      names_.push_back("x" + std::to_string(i + 1));
    }
  } else if (names_.size() != bounds_.size()) {
    throw ParameterError("chart axis names do not match dimension");
  }
}

ChartDomain ChartDomain::box(std::vector<Interval> bounds,
                             std::vector<std::string> names) {
  std::vector<bool> p(bounds.size(), false);
  return ChartDomain(std::move(bounds), std::move(p), std::move(names));
}

ChartDomain ChartDomain::torus(std::vector<Interval> bounds,
                               std::vector<std::string> names) {
  std::vector<bool> p(bounds.size(), true);
  return ChartDomain(std::move(bounds), std::move(p), std::move(names));
}

bool ChartDomain::all_periodic() const {
  for (bool p : periodic_) {
    if (!p) return false;
  }
  return true;
}

void ChartDomain::require_interior(const Point& x, const Vector& reach,
                                   const char* what) const {
  if (x.size() != dim()) {
    throw ParameterError(std::string(what) + ": point has dimension " +
                         std::to_string(x.size()) + ", chart has " +
                         std::to_string(dim()));
  }
  for (int a = 0; a < dim(); ++a) {
    if (periodic_[a]) continue;
    if (x[a] - reach[a] < bounds_[a].lo || x[a] + reach[a] > bounds_[a].hi) {
      throw BoundaryError(std::string(what) + ": point " + format_point(x) +
                          " is within stencil reach of the boundary on axis " +
                          names_[a]);
    }
  }
}

bool ChartDomain::contains(const Point& x) const {
  if (x.size() != dim()) return false;
  for (int a = 0; a < dim(); ++a) {
    if (periodic_[a]) continue;
    if (x[a] < bounds_[a].lo || x[a] > bounds_[a].hi) return false;
  }
  return true;
}

ChartDomain ChartDomain::product(const ChartDomain& other) const {
  auto b = bounds_;
  auto p = periodic_;
  auto n = names_;
  b.insert(b.end(), other.bounds_.begin(), other.bounds_.end());
  p.insert(p.end(), other.periodic_.begin(), other.periodic_.end());
  n.insert(n.end(), other.names_.begin(), other.names_.end());
  return ChartDomain(std::move(b), std::move(p), std::move(n));
}

std::string format_point(const Point& x) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

}  // namespace mmcurv
