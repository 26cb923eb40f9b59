#include "mmcurv/submersion.hpp"

#include "mmcurv/errors.hpp"

#include <cmath>

namespace mmcurv {

KKSubmersion::KKSubmersion(ChartDomain base, ChartDomain fiber,
                           MatrixFn g_base, MatrixFn g_fiber,
                           MatrixFn connection, ScalarFn phi_m)
    : base_(std::move(base)),
      fiber_(std::move(fiber)),
      total_(base_.product(fiber_)),
      g_base_(std::move(g_base)),
      g_fiber_(std::move(g_fiber)),
      connection_(std::move(connection)) {
  if (!fiber_.all_periodic()) {
    throw UnsupportedDomainError("fiber chart must be a torus (compact fiber)");
  }
  if (!g_base_ || !g_fiber_ || !connection_) {
    throw ParameterError("submersion needs base metric, fiber metric and "
                         "connection callables");
  }
  phi_m_ = phi_m ? DensityField(total_, std::move(phi_m))
                 : DensityField::unit(total_);
}

Point KKSubmersion::join(const Point& x, const Point& y) const {
  Point p(total_dim());
  p << x, y;
  return p;
}

Matrix KKSubmersion::g_base(const Point& x) const { return g_base_(x); }
Matrix KKSubmersion::g_fiber(const Point& p) const { return g_fiber_(p); }

Matrix KKSubmersion::connection(const Point& p) const {
  Matrix a = connection_(p);
  if (a.rows() != fiber_dim() || a.cols() != base_dim()) {
    throw ParameterError("connection must be a fiber_dim x base_dim matrix");
  }
  return a;
}

MetricField KKSubmersion::base_metric() const {
  return MetricField(base_, g_base_);
}

MetricField KKSubmersion::fiber_metric(const Point& x) const {
  const int n = base_dim();
  const int q = fiber_dim();
  auto gf = g_fiber_;
  return MetricField(fiber_, [gf, x, n, q](const Point& y) {
    Point p(n + q);
    p << x, y;
    return gf(p);
  });
}

MetricField KKSubmersion::total_metric() const {
  return assemble_total_metric(*this);
}

DensityField KKSubmersion::phi_fiber(const Point& x) const {
  const int n = base_dim();
  const int q = fiber_dim();
  if (phi_m_.is_unit()) return DensityField::unit(fiber_);
  DensityField phi = phi_m_;
  return DensityField(fiber_, [phi, x, n, q](const Point& y) {
    Point p(n + q);
    p << x, y;
    return phi.eval(p);
  });
}

MetricField assemble_total_metric(const KKSubmersion& s) {
  const int n = s.base_dim();
  const int q = s.fiber_dim();
  // Copy the submersion into the closure: fields outlive the caller's object.
  return MetricField(s.total_domain(), [s, n, q](const Point& p) {
    const Matrix gb = s.g_base(p.head(n));
    const Matrix gf = s.g_fiber(p);
    const Matrix a = s.connection(p);
    Matrix g(n + q, n + q);
    const Matrix gfa = gf * a;
    g.topLeftCorner(n, n) = gb + a.transpose() * gfa;
    g.topRightCorner(n, q) = gfa.transpose();
    g.bottomLeftCorner(q, n) = gfa;
    g.bottomRightCorner(q, q) = gf;
    return g;
  });
}

namespace {

// Columns orthonormal with respect to g, upper triangular in the coordinate
// basis (i.e. Gram-Schmidt on d_1, d_2, ...).
Matrix gram_schmidt_frame(const Matrix& g, const Point& where) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw DegenerateMetricError("metric block not positive definite at " +
                                format_point(where));
  }
  const Matrix l = llt.matrixL();
  return l.transpose().triangularView<Eigen::Upper>().solve(
      Matrix::Identity(g.rows(), g.cols()));
}

Matrix maybe_rotate(const Matrix& frame, const Matrix& rot) {
  if (rot.size() == 0) return frame;
  if (rot.rows() != frame.cols() || rot.cols() != frame.cols()) {
    throw ParameterError("frame rotation has wrong size");
  }
  return frame * rot;
}

Vector project(const Matrix& g, const Matrix& frame, const Vector& v) {
  return frame * (frame.transpose() * (g * v));
}

}  // namespace

AdaptedFrame adapted_frame(const KKSubmersion& s, const Point& p,
                           const Matrix& rotate_horizontal,
                           const Matrix& rotate_vertical) {
  const int n = s.base_dim();
  const int q = s.fiber_dim();
  const Point x = s.base_part(p);
  AdaptedFrame f;
  f.point = p;
  f.base_frame =
      maybe_rotate(gram_schmidt_frame(s.g_base(x), x), rotate_horizontal);
  const Matrix a = s.connection(p);
  f.horizontal.resize(n + q, n);
  f.horizontal.topRows(n) = f.base_frame;
  f.horizontal.bottomRows(q) = -a * f.base_frame;
  const Matrix fiber_frame =
      maybe_rotate(gram_schmidt_frame(s.g_fiber(p), p), rotate_vertical);
  f.vertical = Matrix::Zero(n + q, q);
  f.vertical.bottomRows(q) = fiber_frame;
  return f;
}

FiberGeometry fiber_geometry(const KKSubmersion& s, const Point& p,
                             const DifferentiationConfig& cfg,
                             const Matrix& rotate_horizontal,
                             const Matrix& rotate_vertical) {
  const int n = s.base_dim();
  const int q = s.fiber_dim();
  const int dim = n + q;
  const MetricField total = assemble_total_metric(s);
  const MetricJet jet = metric_jet(total, p, cfg, false);
  FiberGeometry fg;
  fg.frame = adapted_frame(s, p, rotate_horizontal, rotate_vertical);
  fg.g = jet.g;
  fg.gamma = christoffel_from_jet(jet);

  // nabla_{d_{y_i}} d_{y_j} = Gamma^k_{n+i, n+j} d_k; T is tensorial in both
  // slots on vertical fields so coordinate fields suffice.
  const Matrix& hor = fg.frame.horizontal;
  const Matrix uf = fg.frame.vertical.bottomRows(q);
  std::vector<Vector> cov(static_cast<std::size_t>(q) * q, Vector(dim));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < dim; ++k) cov[i * q + j][k] = fg.gamma(k, n + i, n + j);

  fg.mean_curvature = Vector::Zero(dim);
  fg.T_norm2 = 0.0;
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      Vector v = Vector::Zero(dim);
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) v += uf(i, a) * uf(j, b) * cov[i * q + j];
      const Vector t = project(fg.g, hor, v);
      fg.T_norm2 += t.dot(fg.g * t);
      if (a == b) fg.mean_curvature += t;
    }
  }
  return fg;
}

Vector mean_curvature_vector(const KKSubmersion& s, const Point& p,
                             const DifferentiationConfig& cfg) {
  return fiber_geometry(s, p, cfg).mean_curvature;
}

double check_delta_N(const KKSubmersion& s, const FiberGeometry& fg,
                     const DifferentiationConfig& cfg) {
  const int n = s.base_dim();
  const int dim = s.total_dim();
  const Point& p = fg.frame.point;
  const Vector hn = axis_steps(s.total_domain(), cfg.nested_step);
  const Vector h = axis_steps(s.total_domain(), cfg.step);
  const double half = stencil_half_width(cfg.stencil_order);
  s.total_domain().require_interior(p, half * (hn + h), "nested derivative");

  auto n_at = [&](const Point& x) { return mean_curvature_vector(s, x, cfg); };
  Matrix dN(dim, dim);  // dN(k, m) = d_m N^k
  for (int m = 0; m < dim; ++m) {
    dN.col(m) = stencil::first_derivative(n_at, p, m, hn[m], cfg.stencil_order);
  }
  const Vector& N = fg.mean_curvature;
  double acc = 0.0;
  for (int a = 0; a < n; ++a) {
    const Vector e = fg.frame.horizontal.col(a);
    Vector cov = dN * e;
    for (int k = 0; k < dim; ++k) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) cov[k] += fg.gamma(k, i, j) * e[i] * N[j];
      }
    }
    acc += e.dot(fg.g * cov);
  }
  return -acc;
}

SubmersionPointReport oneill_invariants(const KKSubmersion& s, const Point& p,
                                        const DifferentiationConfig& cfg,
                                        const Matrix& rotate_horizontal,
                                        const Matrix& rotate_vertical) {
  const int n = s.base_dim();
  const int q = s.fiber_dim();
  const int dim = n + q;
  const FiberGeometry fg =
      fiber_geometry(s, p, cfg, rotate_horizontal, rotate_vertical);

  // A via coordinate horizontal lifts h_a = d_a - A^i_a d_{y_i}, which is
  // tensorial on horizontal fields; the constant base_frame change of basis
  // then gives the orthonormal values.
  const Vector h = axis_steps(s.total_domain(), cfg.step);
  const auto& conn = s.connection_fn();
  std::vector<Matrix> dconn(dim);
  for (int m = 0; m < dim; ++m) {
    dconn[m] = stencil::first_derivative(conn, p, m, h[m], cfg.stencil_order);
  }
  const Matrix a = s.connection(p);
  Matrix lifts = Matrix::Zero(dim, n);
  lifts.topRows(n) = Matrix::Identity(n, n);
  lifts.bottomRows(q) = -a;
  const Matrix& vert = fg.frame.vertical;
  std::vector<Vector> vcov(static_cast<std::size_t>(n) * n);
  for (int al = 0; al < n; ++al) {
    for (int be = 0; be < n; ++be) {
      Vector v = Vector::Zero(dim);
      for (int i = 0; i < q; ++i) {
        double d = 0.0;
        for (int m = 0; m < dim; ++m) d += lifts(m, al) * dconn[m](i, be);
        v[n + i] = -d;
      }
      for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            v[k] += fg.gamma(k, i, j) * lifts(i, al) * lifts(j, be);
      vcov[al * n + be] = project(fg.g, vert, v);
    }
  }
  const Matrix& e = fg.frame.base_frame;
  std::vector<Vector> amat(static_cast<std::size_t>(n) * n, Vector::Zero(dim));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be)
          amat[x * n + y] += e(al, x) * e(be, y) * vcov[al * n + be];

  SubmersionPointReport r;
  r.point = p;
  double a_scale = 0.0;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const Vector& v = amat[x * n + y];
      const double nv = v.dot(fg.g * v);
      r.A_norm2 += nv;
      a_scale = std::max(a_scale, std::sqrt(nv));
      const Vector sym = v + amat[y * n + x];
      r.a_antisymmetry =
          std::max(r.a_antisymmetry, std::sqrt(std::max(0.0, sym.dot(fg.g * sym))));
    }
  }
  const double tol = std::max(1e-8, 1e3 * std::pow(cfg.step, cfg.stencil_order)) *
                     std::max(1.0, a_scale);
  if (r.a_antisymmetry > tol) {
    throw ConsistencyError("O'Neill A tensor not antisymmetric at " +
                           format_point(p) + " (defect " +
                           std::to_string(r.a_antisymmetry) + ")");
  }

  r.T_norm2 = fg.T_norm2;
  r.N_vector = fg.mean_curvature;
  r.N_norm2 = fg.mean_curvature.dot(fg.g * fg.mean_curvature);
  r.check_delta_N = check_delta_N(s, fg, cfg);

  const Point x = s.base_part(p);
  const Point y = s.fiber_part(p);
  r.R_M = curvature_at(assemble_total_metric(s), p, cfg).scalar;
  r.R_B = curvature_at(s.base_metric(), x, cfg).scalar;
  r.R_F = curvature_at(s.fiber_metric(x), y, cfg).scalar;
  r.residual_3_1 = r.R_M - (r.R_B + r.R_F - r.A_norm2 - r.T_norm2 - r.N_norm2 -
                            2.0 * r.check_delta_N);
  r.cauchy_schwarz_slack = r.T_norm2 - r.N_norm2 / q;
  return r;
}

std::vector<double> fiber_integrate_many(
    const KKSubmersion& s, const Point& x,
    const std::function<std::vector<double>(const Point&)>& integrands,
    std::size_t count, const GridSpec& grid, ExecPolicy policy) {
  const auto nodes = periodic_grid_nodes(s.fiber_domain(), grid);
  const auto rows = parallel_map<std::vector<double>>(
      nodes.size(),
      [&](std::size_t k) {
        const Point p = s.join(x, nodes[k]);
        const double dvol = std::sqrt(s.g_fiber(p).determinant());
        std::vector<double> v = integrands(p);
        if (v.size() != count) {
          throw ParameterError("fiber integrand returned wrong arity");
        }
        for (double& t : v) t *= dvol;
        return v;
      },
      policy);
  const double w = periodic_cell_weight(s.fiber_domain(), grid);
  std::vector<double> out(count);
  std::vector<double> column(nodes.size());
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t k = 0; k < nodes.size(); ++k) column[k] = rows[k][c];
    out[c] = w * pairwise_sum(column);
  }
  return out;
}

double fiber_integrate(const KKSubmersion& s, const Point& x,
                       const ScalarFn& integrand, const GridSpec& grid,
                       ExecPolicy policy) {
  return fiber_integrate_many(
      s, x, [&](const Point& p) { return std::vector<double>{integrand(p)}; },
      1, grid, policy)[0];
}

DensityField pushforward_density(const KKSubmersion& s, const GridSpec& grid) {
  // Nested inside callers' parallel loops, so the inner quadrature is serial.
  return DensityField(s.base_domain(), [s, grid](const Point& x) {
    const DensityField& phi = s.phi_m();
    return fiber_integrate(
        s, x, [&phi](const Point& p) { return phi.eval(p); }, grid,
        ExecPolicy::Serial);
  });
}

MeasurePreservationCheck check_measure_preserving(
    const KKSubmersion& s, const Point& x, const GridSpec& grid,
    const DifferentiationConfig& cfg, ExecPolicy policy) {
  const int n = s.base_dim();
  const auto nodes = periodic_grid_nodes(s.fiber_domain(), grid);
  const ScalarField phi = s.phi_m().as_scalar();
  const auto rows = parallel_map<std::vector<double>>(
      nodes.size(),
      [&](std::size_t k) {
        const Point p = s.join(x, nodes[k]);
        const FiberGeometry fg = fiber_geometry(s, p, cfg);
        const Vector dphi = s.phi_m().is_unit() ? Vector::Zero(p.size())
                                                : partials(phi, p, cfg);
        const double ph = s.phi_m().eval(p);
        std::vector<double> h(n);
        for (int a = 0; a < n; ++a) {
          const Vector e = fg.frame.horizontal.col(a);
          h[a] = dphi.dot(e) / ph - e.dot(fg.g * fg.mean_curvature);
        }
        return h;
      },
      policy);
  MeasurePreservationCheck out;
  const double count = static_cast<double>(nodes.size());
  std::vector<double> col(nodes.size());
  for (int a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < nodes.size(); ++k) col[k] = rows[k][a];
    const double mean = pairwise_sum(col) / count;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      col[k] = (rows[k][a] - mean) * (rows[k][a] - mean);
    }
    const double sd = std::sqrt(pairwise_sum(col) / count);
    out.per_direction.push_back(sd);
    out.per_direction_mean.push_back(mean);
    out.max_fiber_variance = std::max(out.max_fiber_variance, sd);
  }
  return out;
}

LaplacianSplit laplacian_split(const KKSubmersion& s, const ScalarFn& f,
                               const Point& p,
                               const DifferentiationConfig& cfg) {
  const int n = s.base_dim();
  const int q = s.fiber_dim();
  const MetricField total = assemble_total_metric(s);
  const ScalarField ft(s.total_domain(), f);
  const FiberGeometry fg = fiber_geometry(s, p, cfg);
  LaplacianSplit out;

  const Matrix hess = hessian(total, ft, p, cfg);
  const Matrix ginv = fg.g.llt().solve(Matrix::Identity(n + q, n + q));
  out.laplacian_M = ginv.cwiseProduct(hess).sum();
  const Vector df = partials(ft, p, cfg);
  out.grad_M_sq = df.dot(ginv * df);
  for (int a = 0; a < n; ++a) {
    const Vector e = fg.frame.horizontal.col(a);
    out.laplacian_hor += e.dot(hess * e);
    out.grad_hor_sq += std::pow(df.dot(e), 2);
  }
  out.grad_hor_dot_N = df.dot(fg.mean_curvature);

  const Point x = s.base_part(p);
  const MetricField fm = s.fiber_metric(x);
  const ScalarField f_fiber(s.fiber_domain(), [f, x, n, q](const Point& y) {
    Point z(n + q);
    z << x, y;
    return f(z);
  });
  const Point y = s.fiber_part(p);
  out.laplacian_F = laplacian(fm, f_fiber, y, cfg);
  out.grad_F_sq = gradient(fm, f_fiber, y, cfg).norm2;
  return out;
}

}  // namespace mmcurv
