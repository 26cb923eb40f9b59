#pragma once

#include "mmcurv/submersion.hpp"
#include "mmcurv/weighted.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mmcurv {

enum class CatalogKind { Manifold, Weighted, Submersion, Family };

std::string to_string(CatalogKind kind);

/// Closed-form reference value, possibly varying with the point (total-space
/// point for submersions, chart point otherwise).
struct Oracle {
  ScalarFn value;
  std::string provenance;

  double operator()(const Point& p) const { return value(p); }
};

using Params = std::map<std::string, double>;

struct CatalogObject {
  std::string id;
  CatalogKind kind = CatalogKind::Manifold;
  Params params;
  /// Set for manifold and weighted entries.
  std::optional<WeightedManifold> manifold;
  /// Set for submersion and family entries.
  std::optional<KKSubmersion> submersion;
  std::map<std::string, Oracle> oracles;
  /// Interior region recommended for sampling: the chart for manifolds, the
  /// base chart for submersions.
  std::vector<Interval> sample_region;
  /// Set when the entry is expected to violate the measure hypothesis.
  bool expect_hypothesis_failure = false;

  bool is_submersion() const { return submersion.has_value(); }
  /// Throws ParameterError if the oracle is absent.
  const Oracle& oracle(const std::string& name) const;
  bool has_oracle(const std::string& name) const {
    return oracles.count(name) > 0;
  }
};

struct CatalogInfo {
  std::string id;
  CatalogKind kind;
  Params defaults;
  std::string description;
};

const std::vector<CatalogInfo>& catalog_entries();

/// Builds a catalog entry; unspecified params take their defaults. Throws
/// ConfigError for an unknown id or parameter name, ParameterError for an
/// out-of-range value.
CatalogObject build(const std::string& id, const Params& params = {});

/// Seeded uniform samples in a box. The generator and the mapping to [0, 1)
/// are fixed so the same seed gives the same points on every platform.
std::vector<Point> sample_points(const std::vector<Interval>& region,
                                 std::size_t count, std::uint64_t seed);

/// Total-space sample points: base part in the sample region, fiber part
/// uniform over the fiber chart.
std::vector<Point> submersion_sample_points(const CatalogObject& obj,
                                            std::size_t count,
                                            std::uint64_t seed);

/// Three smooth test functions on the total space of a submersion, used for
/// the Laplacian splitting check.
std::vector<ScalarFn> submersion_test_functions(const KKSubmersion& s);

}  // namespace mmcurv
