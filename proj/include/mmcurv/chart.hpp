#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mmcurv {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

/// Coordinate box with per-axis periodicity.
class ChartDomain {
 public:
  ChartDomain() = default;
  ChartDomain(std::vector<Interval> bounds, std::vector<bool> periodic,
              std::vector<std::string> names = {});

  /// All axes non-periodic.
  static ChartDomain box(std::vector<Interval> bounds,
                         std::vector<std::string> names = {});
  /// All axes periodic.
  static ChartDomain torus(std::vector<Interval> bounds,
                           std::vector<std::string> names = {});

  int dim() const { return static_cast<int>(bounds_.size()); }
  const Interval& bounds(int axis) const { return bounds_[axis]; }
  bool periodic(int axis) const { return periodic_[axis]; }
  bool all_periodic() const;
  const std::string& name(int axis) const { return names_[axis]; }
  const std::vector<std::string>& names() const { return names_; }

  /// Throws BoundaryError if x +/- reach[axis] leaves a non-periodic axis.
  void require_interior(const Point& x, const Vector& reach,
                        const char* what) const;
  bool contains(const Point& x) const;

  /// Cartesian product chart (this first, then other).
  ChartDomain product(const ChartDomain& other) const;

 private:
  std::vector<Interval> bounds_;
  std::vector<bool> periodic_;
  std::vector<std::string> names_;
};

std::string format_point(const Point& x);

}  // namespace mmcurv
