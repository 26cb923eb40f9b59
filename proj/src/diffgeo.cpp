#include "mmcurv/diffgeo.hpp"

#include "mmcurv/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mmcurv {

namespace {

Vector reach_for(const Vector& h, int order) {
  return h * static_cast<double>(stencil_half_width(order));
}

}  // namespace

MetricJet metric_jet(const MetricField& m, const Point& x,
                     const DifferentiationConfig& cfg, bool second_order) {
  cfg.validate();
  const int n = m.dim();
  const Vector h = axis_steps(m.domain(), cfg.step);
  m.domain().require_interior(x, reach_for(h, cfg.stencil_order),
                              "metric derivative");
  auto g_at = [&m](const Point& p) { return m.eval(p); };

  MetricJet jet;
  jet.g = m.eval(x);
  jet.ginv = jet.g.llt().solve(Matrix::Identity(n, n));
  jet.ginv = 0.5 * (jet.ginv + jet.ginv.transpose());
  jet.dg.resize(n);
  for (int a = 0; a < n; ++a) {
    jet.dg[a] = stencil::first_derivative(g_at, x, a, h[a], cfg.stencil_order);
  }
  if (second_order) {
    jet.d2g.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
      jet.d2g[a * n + a] =
          stencil::second_derivative(g_at, x, a, h[a], cfg.stencil_order);
      for (int b = a + 1; b < n; ++b) {
        jet.d2g[a * n + b] = stencil::mixed_derivative(g_at, x, a, b, h[a],
                                                       h[b], cfg.stencil_order);
        jet.d2g[b * n + a] = jet.d2g[a * n + b];
      }
    }
  }
  return jet;
}

Tensor3 christoffel_from_jet(const MetricJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  // First kind, symmetric in (i, j) by construction.
  Tensor3 first(n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v =
            0.5 * (jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j));
        first(l, i, j) = v;
        first(l, j, i) = v;
      }
    }
  }
  Tensor3 gamma(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += jet.ginv(k, l) * first(l, i, j);
        gamma(k, i, j) = s;
        gamma(k, j, i) = s;
      }
    }
  }
  return gamma;
}

Tensor3 christoffel(const MetricField& m, const Point& x,
                    const DifferentiationConfig& cfg) {
  return christoffel_from_jet(metric_jet(m, x, cfg, false));
}

CurvatureAtPoint curvature_at(const MetricField& m, const Point& x,
                              const DifferentiationConfig& cfg) {
  const int n = m.dim();
  CurvatureAtPoint out;
  out.riemann_lowered = Tensor4(n);
  out.ricci = Matrix::Zero(n, n);
  if (n == 1) {
    out.christoffel = christoffel(m, x, cfg);
    return out;
  }
  const MetricJet jet = metric_jet(m, x, cfg, true);
  out.christoffel = christoffel_from_jet(jet);
  const Tensor3& gam = out.christoffel;

  // d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
  std::vector<Matrix> dginv(n);
  for (int a = 0; a < n; ++a) dginv[a] = -jet.ginv * jet.dg[a] * jet.ginv;

  // dgam[m](k,i,j) = d_m Gamma^k_ij
  std::vector<Tensor3> dgam(n, Tensor3(n));
  for (int mm = 0; mm < n; ++mm) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Vector first(n), dfirst(n);
        for (int l = 0; l < n; ++l) {
          first[l] = 0.5 * (jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j));
          dfirst[l] = 0.5 * (jet.d2g[mm * n + i](j, l) +
                             jet.d2g[mm * n + j](i, l) -
                             jet.d2g[mm * n + l](i, j));
        }
        const Vector v = dginv[mm] * first + jet.ginv * dfirst;
        for (int k = 0; k < n; ++k) {
          dgam[mm](k, i, j) = v[k];
          dgam[mm](k, j, i) = v[k];
        }
      }
    }
  }

  // R^a_{bcd} = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb
  Tensor4 up(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = c + 1; d < n; ++d) {
          double v = dgam[c](a, d, b) - dgam[d](a, c, b);
          for (int e = 0; e < n; ++e) {
            v += gam(a, c, e) * gam(e, d, b) - gam(a, d, e) * gam(e, c, b);
          }
          up(a, b, c, d) = v;
          up(a, b, d, c) = -v;
        }
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int e = 0; e < n; ++e) v += jet.g(a, e) * up(e, b, c, d);
          out.riemann_lowered(a, b, c, d) = v;
        }
      }
    }
  }
  for (int b = 0; b < n; ++b) {
    for (int d = b; d < n; ++d) {
      double v = 0.0;
      for (int a = 0; a < n; ++a) v += 0.5 * (up(a, b, a, d) + up(a, d, a, b));
      out.ricci(b, d) = v;
      out.ricci(d, b) = v;
    }
  }
  out.scalar = (jet.ginv.cwiseProduct(out.ricci)).sum();
  return out;
}

Vector partials(const ScalarField& f, const Point& x,
                const DifferentiationConfig& cfg) {
  cfg.validate();
  const int n = f.dim();
  const Vector h = axis_steps(f.domain(), cfg.step);
  f.domain().require_interior(x, reach_for(h, cfg.stencil_order),
                              "scalar derivative");
  const auto& fn = f.fn();
  Vector d(n);
  for (int a = 0; a < n; ++a) {
    d[a] = stencil::first_derivative(fn, x, a, h[a], cfg.stencil_order);
  }
  return d;
}

Gradient gradient(const MetricField& m, const ScalarField& f, const Point& x,
                  const DifferentiationConfig& cfg) {
  const Vector df = partials(f, x, cfg);
  const Matrix g = m.eval(x);
  Gradient out;
  out.vec = g.llt().solve(df);
  out.norm2 = std::max(0.0, df.dot(out.vec));
  return out;
}

Matrix hessian(const MetricField& m, const ScalarField& f, const Point& x,
               const DifferentiationConfig& cfg) {
  const int n = f.dim();
  const Vector df = partials(f, x, cfg);
  const Vector h = axis_steps(f.domain(), cfg.step);
  const auto& fn = f.fn();
  const Tensor3 gam = christoffel(m, x, cfg);
  Matrix hess(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double d2 = (i == j)
                      ? stencil::second_derivative(fn, x, i, h[i],
                                                   cfg.stencil_order)
                      : stencil::mixed_derivative(fn, x, i, j, h[i], h[j],
                                                  cfg.stencil_order);
      for (int k = 0; k < n; ++k) d2 -= gam(k, i, j) * df[k];
      hess(i, j) = d2;
      hess(j, i) = d2;
    }
  }
  return hess;
}

double laplacian(const MetricField& m, const ScalarField& f, const Point& x,
                 const DifferentiationConfig& cfg) {
  const Matrix hess = hessian(m, f, x, cfg);
  const Matrix g = m.eval(x);
  const Matrix ginv = g.llt().solve(Matrix::Identity(g.rows(), g.cols()));
  return ginv.cwiseProduct(hess).sum();
}

double riemann_symmetry_defect(const CurvatureAtPoint& c) {
  const int n = c.riemann_lowered.dim();
  const Tensor4& r = c.riemann_lowered;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          worst = std::max(worst, std::abs(r(a, b, i, j) + r(b, a, i, j)));
          worst = std::max(worst, std::abs(r(a, b, i, j) + r(a, b, j, i)));
          worst = std::max(worst, std::abs(r(a, b, i, j) - r(i, j, a, b)));
        }
  return worst;
}

double bianchi_defect(const CurvatureAtPoint& c) {
  const int n = c.riemann_lowered.dim();
  const Tensor4& r = c.riemann_lowered;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          worst = std::max(worst, std::abs(r(a, b, i, j) + r(a, i, j, b) +
                                           r(a, j, b, i)));
        }
  return worst;
}

}  // namespace mmcurv
