#include "mmcurv/catalog.hpp"

#include "mmcurv/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mmcurv {

namespace {

constexpr double kPi = std::numbers::pi;

Oracle constant_oracle(double v, std::string provenance) {
  return {[v](const Point&) { return v; }, std::move(provenance)};
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix scalar1(double a) { return Matrix::Constant(1, 1, a); }

double param(const Params& p, const std::string& key) { return p.at(key); }

void require_range(const std::string& id, const std::string& key, double v,
                   double lo, double hi) {
  if (!(v >= lo && v <= hi)) {
    throw ParameterError(id + ": parameter " + key + " = " + std::to_string(v) +
                         " outside [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
}

const std::vector<Interval> kSphereSamples = {{0.2, kPi - 0.2}, {0.0, 2 * kPi}};

ChartDomain sphere_chart() {
  return ChartDomain({{0.0, kPi}, {0.0, 2 * kPi}}, {false, true}, {"u", "v"});
}

ChartDomain circle_fiber() {
  return ChartDomain::torus({{0.0, 2 * kPi}}, {"y"});
}

CatalogObject make_sphere(const Params& p) {
  const double r = param(p, "r");
  require_range("sphere", "r", r, 1e-3, 1e3);
  CatalogObject o;
  o.kind = CatalogKind::Manifold;
  o.manifold = WeightedManifold::unweighted(
      MetricField(sphere_chart(), [r](const Point& x) {
        const double s = std::sin(x[0]);
        return diag2(r * r, r * r * s * s);
      }));
  o.oracles["R"] =
      constant_oracle(2.0 / (r * r), "round sphere of radius r: R = 2/r^2");
  o.sample_region = kSphereSamples;
  return o;
}

CatalogObject make_sphere_stereo(const Params& p) {
  const double r = param(p, "r");
  require_range("sphere_stereo", "r", r, 1e-3, 1e3);
  CatalogObject o;
  o.kind = CatalogKind::Manifold;
  o.manifold = WeightedManifold::unweighted(MetricField(
      ChartDomain::box({{-3.0, 3.0}, {-3.0, 3.0}}, {"z1", "z2"}),
      [r](const Point& z) {
        const double c = 2.0 * r / (1.0 + z.squaredNorm());
        return diag2(c * c, c * c);
      }));
  o.oracles["R"] = constant_oracle(
      2.0 / (r * r), "stereographic chart of the round sphere: R = 2/r^2");
  o.sample_region = {{-2.0, 2.0}, {-2.0, 2.0}};
  return o;
}

CatalogObject make_hyperbolic(const Params&) {
  CatalogObject o;
  o.kind = CatalogKind::Manifold;
  o.manifold = WeightedManifold::unweighted(
      MetricField(ChartDomain::box({{-5.0, 5.0}, {0.01, 10.0}}, {"x", "y"}),
                  [](const Point& x) {
                    const double c = 1.0 / (x[1] * x[1]);
                    return diag2(c, c);
                  }));
  o.oracles["R"] = constant_oracle(
      -2.0, "upper half-plane, constant curvature -1: R = -2");
  o.sample_region = {{-2.0, 2.0}, {0.5, 3.0}};
  return o;
}

CatalogObject make_flat_torus(const Params& p) {
  const double nd = param(p, "n");
  require_range("flat_torus", "n", nd, 1, 6);
  const int n = static_cast<int>(nd);
  if (n != nd) throw ParameterError("flat_torus: n must be an integer");
  CatalogObject o;
  o.kind = CatalogKind::Manifold;
  o.manifold = WeightedManifold::unweighted(
      MetricField(ChartDomain::torus(std::vector<Interval>(n, {0.0, 1.0})),
                  [n](const Point&) { return Matrix::Identity(n, n); }));
  o.oracles["R"] = constant_oracle(0.0, "flat metric: R = 0");
  o.sample_region = std::vector<Interval>(n, {0.0, 1.0});
  return o;
}

CatalogObject make_gaussian_line(const Params& p) {
  const double q = param(p, "q");
  require_range("gaussian_line", "q", q, 1e-6, 1e12);
  CatalogObject o;
  o.kind = CatalogKind::Weighted;
  const ChartDomain dom = ChartDomain::box({{-5.0, 5.0}}, {"x"});
  o.manifold = WeightedManifold{
      MetricField(dom, [](const Point&) { return scalar1(1.0); }),
      DensityField(dom, [](const Point& x) { return std::exp(-0.5 * x[0] * x[0]); })};
  o.oracles["R"] = constant_oracle(0.0, "one-dimensional: R = 0");
  o.oracles["R_inf"] = {[](const Point& x) { return 2.0 - x[0] * x[0]; },
                        "phi''/phi = x^2 - 1, phi'/phi = -x: R_inf = 2 - x^2"};
  o.oracles["R_q"] = {
      [q](const Point& x) { return 2.0 - x[0] * x[0] - x[0] * x[0] / q; },
      "R_q = -2(x^2 - 1) + (1 - 1/q) x^2"};
  o.sample_region = {{-2.0, 2.0}};
  return o;
}

CatalogObject make_weighted_torus(const Params& p) {
  const double a = param(p, "a");
  require_range("weighted_torus", "a", a, -10.0, 10.0);
  CatalogObject o;
  o.kind = CatalogKind::Weighted;
  const ChartDomain dom = ChartDomain::torus({{0.0, 1.0}, {0.0, 1.0}});
  o.manifold = WeightedManifold{
      MetricField(dom, [](const Point&) { return Matrix::Identity(2, 2); }),
      DensityField(dom, [a](const Point& x) {
        return std::exp(a * std::cos(2 * kPi * x[0]));
      })};
  o.oracles["R"] = constant_oracle(0.0, "flat torus: R = 0");
  o.oracles["mean_grad_log_phi_sq"] = constant_oracle(
      2 * kPi * kPi * a * a,
      "|grad ln phi|^2 = (2 pi a sin 2 pi x)^2, mean 2 pi^2 a^2");
  o.sample_region = {{0.0, 1.0}, {0.0, 1.0}};
  return o;
}

CatalogObject make_weighted_circle(const Params& p) {
  const double b = param(p, "b");
  require_range("weighted_circle", "b", b, -0.99, 0.99);
  CatalogObject o;
  o.kind = CatalogKind::Weighted;
  const ChartDomain dom = ChartDomain::torus({{0.0, 1.0}});
  o.manifold = WeightedManifold{
      MetricField(dom, [](const Point&) { return scalar1(1.0); }),
      DensityField(dom, [b](const Point& x) {
        return 1.0 + b * std::sin(2 * kPi * x[0]);
      })};
  o.oracles["R"] = constant_oracle(0.0, "one-dimensional: R = 0");
  o.sample_region = {{0.0, 1.0}};
  return o;
}

// Base S^2(1) or flat T^2 times a circle of radius eps.
CatalogObject make_product(const Params& p, bool sphere_base) {
  const double eps = param(p, "eps");
  require_range("product", "eps", eps, 1e-3, 1e3);
  CatalogObject o;
  o.kind = CatalogKind::Submersion;
  ChartDomain base = sphere_base
                         ? sphere_chart()
                         : ChartDomain::torus({{0.0, 2 * kPi}, {0.0, 2 * kPi}},
                                              {"x1", "x2"});
  MatrixFn gb = sphere_base ? MatrixFn([](const Point& x) {
    const double s = std::sin(x[0]);
    return diag2(1.0, s * s);
  })
                            : MatrixFn([](const Point&) {
                                return Matrix(Matrix::Identity(2, 2));
                              });
  o.submersion = KKSubmersion(
      base, circle_fiber(), gb,
      [eps](const Point&) { return scalar1(eps * eps); },
      [](const Point&) { return Matrix(Matrix::Zero(1, 2)); });
  const double rb = sphere_base ? 2.0 : 0.0;
  o.oracles["R_M"] = constant_oracle(rb, "metric product: R_M = R_B + R_F");
  o.oracles["R_B"] = constant_oracle(rb, sphere_base ? "unit sphere" : "flat");
  o.oracles["R_F"] = constant_oracle(0.0, "circle fiber");
  o.oracles["A_norm2"] = constant_oracle(0.0, "product: A = 0");
  o.oracles["T_norm2"] = constant_oracle(0.0, "product: T = 0");
  o.oracles["N_norm2"] = constant_oracle(0.0, "product: N = 0");
  o.oracles["phi_B"] = constant_oracle(2 * kPi * eps, "fiber length 2 pi eps");
  o.oracles["R_B_q"] = constant_oracle(rb, "phi_B constant");
  o.sample_region = sphere_base
                        ? kSphereSamples
                        : std::vector<Interval>{{0.0, 2 * kPi}, {0.0, 2 * kPi}};
  return o;
}

CatalogObject make_hopf(const Params& p) {
  const double eps = param(p, "eps");
  const double alpha = param(p, "alpha");
  require_range("hopf", "eps", eps, 1e-3, 10.0);
  require_range("hopf", "alpha", alpha, -5.0, 5.0);
  CatalogObject o;
  o.kind = CatalogKind::Submersion;
  ScalarFn phi = nullptr;
  if (alpha != 0.0) {
    phi = [alpha](const Point& x) { return std::exp(alpha * std::cos(x[0])); };
  }
  o.submersion = KKSubmersion(
      sphere_chart(), circle_fiber(),
      [](const Point& x) {
        const double s = std::sin(x[0]);
        return diag2(0.25, 0.25 * s * s);
      },
      [eps](const Point&) { return scalar1(eps * eps); },
      [](const Point& x) {
        Matrix a(1, 2);
        a << 0.0, 0.5 * (1.0 - std::cos(x[0]));
        return a;
      },
      phi);
  const std::string berger = "Berger sphere: R = 8 - 2 eps^2";
  o.oracles["R_M"] = constant_oracle(8.0 - 2.0 * eps * eps, berger);
  o.oracles["R_B"] = constant_oracle(8.0, "base S^2(1/2): R = 2/(1/4)");
  o.oracles["R_F"] = constant_oracle(0.0, "circle fiber");
  o.oracles["A_norm2"] = constant_oracle(
      2.0 * eps * eps, "circle bundle with curvature form of norm 2: 2 eps^2");
  o.oracles["T_norm2"] = constant_oracle(0.0, "constant fiber metric: T = 0");
  o.oracles["N_norm2"] = constant_oracle(0.0, "totally geodesic fibers");
  if (alpha == 0.0) {
    o.oracles["phi_B"] =
        constant_oracle(2 * kPi * eps, "constant fiber length 2 pi eps");
    o.oracles["R_B_q"] =
        constant_oracle(8.0, "phi_B constant so R_q = R_B = 8");
  }
  o.sample_region = kSphereSamples;
  return o;
}

// g = g_{S^2(1)} + f(u)^2 (dy_1^2 + ... + dy_q^2), f = exp(t cos u).
CatalogObject make_warped(const Params& p, int q) {
  const double t = param(p, "t");
  const double alpha = param(p, "alpha");
  require_range("warped", "t", t, -3.0, 3.0);
  require_range("warped", "alpha", alpha, -5.0, 5.0);
  CatalogObject o;
  o.kind = CatalogKind::Submersion;
  ScalarFn phi = nullptr;
  if (alpha != 0.0) {
    phi = [alpha](const Point& x) { return std::exp(alpha * std::cos(x[0])); };
  }
  std::vector<Interval> fb(q, {0.0, 2 * kPi});
  std::vector<std::string> names;
  for (int i = 0; i < q; ++i) names.push_back("y" + std::to_string(i + 1));
  o.submersion = KKSubmersion(
      sphere_chart(), ChartDomain::torus(fb, names),
      [](const Point& x) {
        const double s = std::sin(x[0]);
        return diag2(1.0, s * s);
      },
      [t, q](const Point& x) {
        const double f = std::exp(t * std::cos(x[0]));
        return Matrix(f * f * Matrix::Identity(q, q));
      },
      [q](const Point&) { return Matrix(Matrix::Zero(q, 2)); }, phi);
  const double qd = q;
  // lap f / f = -2 t cos u + t^2 sin^2 u and |grad f|^2/f^2 = t^2 sin^2 u on
  // the unit sphere.
  o.oracles["R_M"] = {
      [t, qd](const Point& x) {
        const double c = std::cos(x[0]);
        const double s2 = std::sin(x[0]) * std::sin(x[0]);
        const double lap = -2 * t * c + t * t * s2;
        return 2.0 - 2 * qd * lap - qd * (qd - 1) * t * t * s2;
      },
      "warped product: R = R_B - 2q lap f/f - q(q-1)|grad f|^2/f^2"};
  o.oracles["R_B"] = constant_oracle(2.0, "unit sphere");
  o.oracles["R_F"] = constant_oracle(0.0, "flat fiber");
  o.oracles["A_norm2"] = constant_oracle(0.0, "integrable horizontal");
  o.oracles["T_norm2"] = {
      [t, qd](const Point& x) {
        return qd * t * t * std::sin(x[0]) * std::sin(x[0]);
      },
      "umbilic fibers: |T|^2 = q |grad ln f|^2"};
  o.oracles["N_norm2"] = {
      [t, qd](const Point& x) {
        return qd * qd * t * t * std::sin(x[0]) * std::sin(x[0]);
      },
      "N = -q grad ln f"};
  if (alpha == 0.0) {
    o.oracles["phi_B"] = {
        [t, qd](const Point& x) {
          return std::pow(2 * kPi * std::exp(t * std::cos(x[0])), qd);
        },
        "fiber volume (2 pi f)^q"};
  }
  o.sample_region = kSphereSamples;
  return o;
}

CatalogObject make_heisenberg(const Params&) {
  CatalogObject o;
  o.kind = CatalogKind::Submersion;
  o.submersion = KKSubmersion(
      ChartDomain::box({{0.0, 1.0}, {0.0, 1.0}}, {"x1", "x2"}),
      ChartDomain::torus({{0.0, 1.0}}, {"y"}),
      [](const Point&) { return Matrix(Matrix::Identity(2, 2)); },
      [](const Point&) { return scalar1(1.0); },
      [](const Point& p) {
        Matrix a(1, 2);
        a << 0.0, p[0];
        return a;
      });
  o.oracles["R_M"] = constant_oracle(-0.5, "Heisenberg left-invariant metric");
  o.oracles["R_B"] = constant_oracle(0.0, "flat base");
  o.oracles["R_F"] = constant_oracle(0.0, "circle fiber");
  o.oracles["A_norm2"] =
      constant_oracle(0.5, "dA = dx1 ^ dx2: |A|^2 = 2 * (1/2)^2");
  o.oracles["T_norm2"] = constant_oracle(0.0, "constant fiber metric");
  o.oracles["N_norm2"] = constant_oracle(0.0, "totally geodesic fibers");
  o.oracles["phi_B"] = constant_oracle(1.0, "fiber length 1");
  o.oracles["R_B_q"] = constant_oracle(0.0, "flat base, constant phi_B");
  o.sample_region = {{0.1, 0.9}, {0.1, 0.9}};
  return o;
}

CatalogObject make_violating(const Params& p) {
  const double b = param(p, "b");
  require_range("violating", "b", b, 0.01, 0.9);
  CatalogObject o;
  o.kind = CatalogKind::Submersion;
  o.submersion = KKSubmersion(
      ChartDomain::box({{0.0, kPi}}, {"u"}), circle_fiber(),
      [](const Point&) { return scalar1(1.0); },
      [b](const Point& p) {
        const double f = 1.0 + b * std::sin(p[0]) * std::sin(p[1]);
        return scalar1(f * f);
      },
      [](const Point&) { return Matrix(Matrix::Zero(1, 1)); });
  o.oracles["R_B"] = constant_oracle(0.0, "one-dimensional base");
  o.oracles["R_F"] = constant_oracle(0.0, "circle fiber");
  o.oracles["A_norm2"] = constant_oracle(0.0, "one-dimensional base");
  o.sample_region = {{0.3, kPi - 0.3}};
  o.expect_hypothesis_failure = true;
  return o;
}

struct Builder {
  CatalogInfo info;
  CatalogObject (*make)(const Params&);
};

const std::vector<Builder>& builders() {
  static const std::vector<Builder> b = {
      {{"sphere", CatalogKind::Manifold, {{"r", 1.0}},
        "round sphere S^2(r), polar chart"},
       make_sphere},
      {{"sphere_stereo", CatalogKind::Manifold, {{"r", 1.0}},
        "round sphere S^2(r), stereographic chart"},
       make_sphere_stereo},
      {{"hyperbolic", CatalogKind::Manifold, {}, "upper half-plane"},
       make_hyperbolic},
      {{"flat_torus", CatalogKind::Manifold, {{"n", 2.0}}, "flat unit torus T^n"},
       make_flat_torus},
      {{"gaussian_line", CatalogKind::Weighted, {{"q", 1.0}},
        "real line with phi = exp(-x^2/2)"},
       make_gaussian_line},
      {{"weighted_torus", CatalogKind::Weighted, {{"a", 1.0}},
        "flat T^2 with phi = exp(a cos 2 pi x1)"},
       make_weighted_torus},
      {{"weighted_circle", CatalogKind::Weighted, {{"b", 0.5}},
        "flat T^1 with phi = 1 + b sin 2 pi x"},
       make_weighted_circle},
      {{"product", CatalogKind::Submersion, {{"eps", 1.0}},
        "flat T^2 x circle of radius eps"},
       [](const Params& p) { return make_product(p, false); }},
      {{"product_sphere", CatalogKind::Submersion, {{"eps", 1.0}},
        "S^2(1) x circle of radius eps"},
       [](const Params& p) { return make_product(p, true); }},
      {{"hopf", CatalogKind::Submersion, {{"eps", 1.0}, {"alpha", 0.0}},
        "Berger sphere over S^2(1/2); alpha sets phi_M = exp(alpha cos u)"},
       make_hopf},
      {{"warped_circle", CatalogKind::Submersion, {{"t", 1.0}, {"alpha", 0.0}},
        "S^2(1) x_f circle, f = exp(t cos u)"},
       [](const Params& p) { return make_warped(p, 1); }},
      {{"warped_torus", CatalogKind::Submersion, {{"t", 1.0}, {"alpha", 0.0}},
        "S^2(1) x_f T^2, f = exp(t cos u)"},
       [](const Params& p) { return make_warped(p, 2); }},
      {{"heisenberg", CatalogKind::Submersion, {},
        "Heisenberg circle bundle over a square, connection x1 dx2"},
       make_heisenberg},
      {{"violating", CatalogKind::Submersion, {{"b", 0.5}},
        "fiber metric (1 + b sin u sin y)^2: transport not measure-preserving"},
       make_violating},
      {{"berger_family", CatalogKind::Family, {{"eps", 1.0}, {"alpha", 0.0}},
        "collapse family: hopf(eps), eps -> 0"},
       make_hopf},
      {{"product_family", CatalogKind::Family, {{"eps", 1.0}},
        "collapse family: T^2 x circle(eps)"},
       [](const Params& p) { return make_product(p, false); }},
      {{"warped_family", CatalogKind::Family, {{"t", 1.0}, {"alpha", 0.0}},
        "family warped_circle(t)"},
       [](const Params& p) { return make_warped(p, 1); }},
  };
  return b;
}

}  // namespace

std::string to_string(CatalogKind kind) {
  switch (kind) {
    case CatalogKind::Manifold: return "manifold";
    case CatalogKind::Weighted: return "weighted";
    case CatalogKind::Submersion: return "submersion";
    case CatalogKind::Family: return "family";
  }
  return "unknown";
}

const Oracle& CatalogObject::oracle(const std::string& name) const {
  auto it = oracles.find(name);
  if (it == oracles.end()) {
    throw ParameterError(id + " has no oracle named " + name);
  }
  return it->second;
}

const std::vector<CatalogInfo>& catalog_entries() {
  static const std::vector<CatalogInfo> infos = [] {
    std::vector<CatalogInfo> v;
    for (const auto& b : builders()) v.push_back(b.info);
    return v;
  }();
  return infos;
}

CatalogObject build(const std::string& id, const Params& params) {
  for (const auto& b : builders()) {
    if (b.info.id != id) continue;
    Params merged = b.info.defaults;
    for (const auto& [k, v] : params) {
      if (!merged.count(k)) {
        throw ConfigError("example " + id + " has no parameter named " + k);
      }
      merged[k] = v;
    }
    CatalogObject o = b.make(merged);
    o.id = id;
    o.kind = b.info.kind;
    o.params = merged;
    return o;
  }
  throw ConfigError("unknown example id: " + id);
}

std::vector<Point> sample_points(const std::vector<Interval>& region,
                                 std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p(static_cast<Eigen::Index>(region.size()));
    for (std::size_t a = 0; a < region.size(); ++a) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      p[static_cast<Eigen::Index>(a)] =
          region[a].lo + u * (region[a].hi - region[a].lo);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> submersion_sample_points(const CatalogObject& obj,
                                            std::size_t count,
                                            std::uint64_t seed) {
  if (!obj.submersion) throw ParameterError(obj.id + " is not a submersion");
  std::vector<Interval> region = obj.sample_region;
  const ChartDomain& fiber = obj.submersion->fiber_domain();
  for (int a = 0; a < fiber.dim(); ++a) region.push_back(fiber.bounds(a));
  return sample_points(region, count, seed);
}

std::vector<ScalarFn> submersion_test_functions(const KKSubmersion& s) {
  const int n = s.base_dim();
  const int last = s.total_dim() - 1;
  const int second = n > 1 ? 1 : 0;
  const double k0 = 2 * kPi / s.total_domain().bounds(0).length();
  const double kl = 2 * kPi / s.total_domain().bounds(last).length();
  const double k1 = 2 * kPi / s.total_domain().bounds(second).length();
  return {
      [k0, kl, last](const Point& p) {
        return std::cos(k0 * p[0]) * std::cos(kl * p[last]);
      },
      [k0, k1, kl, last, second](const Point& p) {
        return std::sin(k0 * p[0] + 2.0 * kl * p[last]) +
               0.5 * std::cos(k1 * p[second]);
      },
      [k0, kl, last](const Point& p) {
        return std::exp(0.3 * std::sin(k0 * p[0]) + 0.2 * std::cos(kl * p[last]));
      },
  };
}

}  // namespace mmcurv
