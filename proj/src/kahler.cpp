#include "maslovcw/kahler.hpp"

#include <cmath>
#include <numbers>

namespace mcw {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Eigen::VectorXcd> probe_grid(int n) {
  std::vector<Eigen::VectorXcd> probes;
  const Complex seeds[] = {{0.0, 0.0}, {0.3, 0.1}, {-0.5, 0.4}, {0.9, 0.0}, {0.2, -0.8}};
  for (const Complex& s : seeds) {
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j < n; ++j) z[j] = s * (1.0 + 0.2 * j) * ((j % 2 == 0) ? 1.0 : Complex(0, 1));
    probes.push_back(std::move(z));
  }
  return probes;
}

// Complex Hessian (d/dz_j)(d/dzbar_k) of a real scalar function, from the
// real Hessian by central differences.
Eigen::MatrixXcd complex_hessian(const std::function<double(const Eigen::VectorXcd&)>& f,
                                 const Eigen::VectorXcd& z, double step) {
  if (step < 1e-9) {
    throw Error(errc::step_underflow, "finite-difference step collapsed below 1e-9");
  }
  const int n = static_cast<int>(z.size());
  const int dim = 2 * n;
  auto bump = [n](Eigen::VectorXcd& w, int a, double delta) {
    if (a < n) {
      w[a] += delta;
    } else {
      w[a - n] += Complex(0.0, delta);
    }
  };
  auto shifted = [&](int a, double da, int b, double db) {
    Eigen::VectorXcd w = z;
    bump(w, a, da);
    if (b >= 0) bump(w, b, db);
    return w;
  };
  Eigen::MatrixXd hess(dim, dim);
  const double f0 = f(z);
  for (int a = 0; a < dim; ++a) {
    hess(a, a) =
        (f(shifted(a, step, -1, 0)) - 2.0 * f0 + f(shifted(a, -step, -1, 0))) / (step * step);
    for (int b = a + 1; b < dim; ++b) {
      hess(a, b) = (f(shifted(a, step, b, step)) - f(shifted(a, step, b, -step)) -
                    f(shifted(a, -step, b, step)) + f(shifted(a, -step, b, -step))) /
                   (4.0 * step * step);
      hess(b, a) = hess(a, b);
    }
  }
  Eigen::MatrixXcd phi(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      phi(j, k) = 0.25 * Complex(hess(j, k) + hess(n + j, n + k),
                                 hess(j, n + k) - hess(n + j, k));
    }
  }
  return 0.5 * (phi + phi.adjoint().eval());
}

// d/dz_j of a matrix field by central differences.
Eigen::MatrixXcd dz_of_matrix(const std::function<Eigen::MatrixXcd(const Eigen::VectorXcd&)>& f,
                              const Eigen::VectorXcd& z, int j, double step) {
  Eigen::VectorXcd xp = z, xm = z, yp = z, ym = z;
  xp[j] += step;
  xm[j] -= step;
  yp[j] += Complex(0, step);
  ym[j] -= Complex(0, step);
  const Eigen::MatrixXcd dx = (f(xp) - f(xm)) / (2 * step);
  const Eigen::MatrixXcd dy = (f(yp) - f(ym)) / (2 * step);
  return 0.5 * (dx - Complex(0, 1) * dy);
}

}  // namespace

KahlerModel KahlerModel::flat_cn(int n) {
  KahlerModel model;
  model.name = "flat_Cn";
  model.n = n;
  model.metric_constant = true;
  model.metric_at = [n](const Eigen::VectorXcd&) { return Eigen::MatrixXcd::Identity(n, n).eval(); };
  model.potential = [](const Eigen::VectorXcd& z) { return z.squaredNorm(); };
  model.ricci_analytic = [](const Eigen::VectorXcd&, const Eigen::VectorXcd&,
                            const Eigen::VectorXcd&) { return 0.0; };
  model.einstein_constant = 0.0;
  return model;
}

KahlerModel KahlerModel::fubini_study_cpn(int n) {
  KahlerModel model;
  model.name = "fubini_study_CPn";
  model.n = n;
  model.metric_at = [n](const Eigen::VectorXcd& z) {
    const double s = 1.0 + z.squaredNorm();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(n, n) / s;
    h -= (z.conjugate() * z.transpose()) / (s * s);
    return (2.0 * h).eval();
  };
  model.potential = [](const Eigen::VectorXcd& z) { return 2.0 * std::log(1.0 + z.squaredNorm()); };
  const int nn = n;
  model.ricci_analytic = [nn](const Eigen::VectorXcd& z, const Eigen::VectorXcd& u,
                              const Eigen::VectorXcd& v) {
    const double s = 1.0 + z.squaredNorm();
    Eigen::MatrixXcd phi0 = Eigen::MatrixXcd::Identity(nn, nn) / s;
    phi0 -= (z.conjugate() * z.transpose()) / (s * s);
    const Complex w = u.transpose() * phi0 * v.conjugate();
    return -2.0 * (nn + 1) * w.imag();
  };
  model.einstein_constant = n + 1;
  return model;
}

KahlerModel KahlerModel::round_sphere(double radius) {
  if (!(radius > 0.0)) {
    throw Error(errc::validation_error, "round sphere radius must be positive");
  }
  KahlerModel model;
  model.name = "round_sphere";
  model.n = 1;
  const double r2 = radius * radius;
  model.metric_at = [r2](const Eigen::VectorXcd& z) {
    const double s = 1.0 + std::norm(z[0]);
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = 4.0 * r2 / (s * s);
    return h;
  };
  model.potential = [r2](const Eigen::VectorXcd& z) {
    return 4.0 * r2 * std::log(1.0 + std::norm(z[0]));
  };
  model.ricci_analytic = [](const Eigen::VectorXcd& z, const Eigen::VectorXcd& u,
                            const Eigen::VectorXcd& v) {
    const double s = 1.0 + std::norm(z[0]);
    return -4.0 / (s * s) * (u[0] * std::conj(v[0])).imag();
  };
  model.einstein_constant = 1.0 / r2;
  return model;
}

KahlerModel KahlerModel::from_potential(int n, std::function<double(const Eigen::VectorXcd&)> K,
                                        std::string name) {
  KahlerModel model;
  model.name = std::move(name);
  model.n = n;
  auto potential = K;
  model.metric_at = [potential](const Eigen::VectorXcd& z) {
    return complex_hessian(potential, z, 1e-3);
  };
  model.potential = std::move(K);
  return model;
}

double KahlerModel::omega(const Eigen::VectorXcd& z, const Eigen::VectorXcd& u,
                          const Eigen::VectorXcd& v) const {
  const Complex h = (u.transpose() * metric_at(z) * v.conjugate())(0, 0);
  return -h.imag();
}

void KahlerModel::validate() const {
  for (const Eigen::VectorXcd& z : probe_grid(n)) {
    const Eigen::MatrixXcd h = metric_at(z);
    Eigen::LLT<Eigen::MatrixXcd> llt(h);
    if (llt.info() != Eigen::Success) {
      throw Error(errc::singular_metric, "model metric is not positive definite at a probe");
    }
    if (potential) {
      const Eigen::MatrixXcd fd = complex_hessian(*potential, z, 1e-3);
      if ((fd - h).norm() > 1e-6 * (1.0 + h.norm())) {
        throw Error(errc::validation_error,
                    "potential does not reproduce the metric at a probe point");
      }
    }
    if (einstein_constant) {
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n), v = Eigen::VectorXcd::Zero(n);
      u[0] = Complex(0.7, 0.1);
      v[0] = Complex(-0.2, 0.9);
      if (n > 1) v[1] = Complex(0.4, 0.0);
      const double rho = ricci_form(*this, z, u, v);
      const double om = omega(z, u, v);
      if (std::abs(rho - *einstein_constant * om) > 1e-6 * (1.0 + std::abs(rho))) {
        throw Error(errc::validation_error, "Einstein relation rho = c omega fails at a probe");
      }
    }
  }
}

std::vector<Eigen::MatrixXcd> chern_connection(const KahlerModel& model, const Eigen::VectorXcd& z,
                                               double step) {
  const Eigen::MatrixXcd h = model.metric_at(z);
  Eigen::LLT<Eigen::MatrixXcd> llt(h);
  if (llt.info() != Eigen::Success) {
    throw Error(errc::singular_metric, "metric is singular at the connection evaluation point");
  }
  const Eigen::MatrixXcd h_inv = llt.solve(Eigen::MatrixXcd::Identity(model.n, model.n));
  std::vector<Eigen::MatrixXcd> gamma;
  gamma.reserve(model.n);
  for (int j = 0; j < model.n; ++j) {
    if (model.metric_constant) {
      gamma.push_back(Eigen::MatrixXcd::Zero(model.n, model.n));
      continue;
    }
    const Eigen::MatrixXcd dh = dz_of_matrix(model.metric_at, z, j, step);
    // Compatibility convention: Gamma_j^T H = d_{z_j} H.
    gamma.push_back((dh * h_inv).transpose());
  }
  return gamma;
}

double ricci_form(const KahlerModel& model, const Eigen::VectorXcd& z, const Eigen::VectorXcd& u,
                  const Eigen::VectorXcd& v, double step) {
  if (model.ricci_analytic) {
    return (*model.ricci_analytic)(z, u, v);
  }
  auto log_det = [&](const Eigen::VectorXcd& w) {
    return std::log(model.metric_at(w).determinant().real());
  };
  const Eigen::MatrixXcd phi = complex_hessian(log_det, z, step);
  const Complex w = u.transpose() * phi * v.conjugate();
  return 2.0 * w.imag();
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> ImmersedSurface::differential(
    const RefPoint& p) const {
  if (jacobian) {
    return (*jacobian)(p);
  }
  const double step = 1e-5;
  const Eigen::VectorXcd dx =
      (map(RefPoint{p.x + step, p.y, p.chart}) - map(RefPoint{p.x - step, p.y, p.chart})) /
      (2 * step);
  const Eigen::VectorXcd dy =
      (map(RefPoint{p.x, p.y + step, p.chart}) - map(RefPoint{p.x, p.y - step, p.chart})) /
      (2 * step);
  return {dx, dy};
}

void ImmersedSurface::validate(const KahlerModel& model) const {
  if (!surface) {
    throw Error(errc::validation_error, "immersed surface has no reference surface");
  }
  const size_t stride = std::max<size_t>(1, surface->triangles.size() / 7);
  for (size_t t = 0; t < surface->triangles.size(); t += stride) {
    const auto& tri = surface->triangles[t];
    const Eigen::Vector2d q = (surface->vertices.row(tri[0]) + surface->vertices.row(tri[1]) +
                               surface->vertices.row(tri[2])) /
                              3.0;
    const RefPoint p{q.x(), q.y(), surface->triangle_chart[t]};
    const Eigen::VectorXcd z = map(p);
    if (z.size() != model.n) {
      throw Error(errc::dimension_mismatch, "immersion target dimension does not match the model");
    }
    auto [du, dv] = differential(p);
    Eigen::MatrixXd real_jac(2 * model.n, 2);
    real_jac.col(0) << du.real(), du.imag();
    real_jac.col(1) << dv.real(), dv.imag();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(real_jac);
    const auto& sv = svd.singularValues();
    if (sv[1] < 1e-8 * std::max(1.0, sv[0])) {
      throw Error(errc::validation_error, "immersion differential drops rank at a probe point");
    }
  }
}

TotallyRealConstraint TotallyRealConstraint::circle(double radius, bool mean_curvature_zero,
                                                    bool soliton) {
  if (!(radius > 0.0)) {
    throw Error(errc::validation_error, "circle radius must be positive");
  }
  TotallyRealConstraint c;
  c.name = "circle";
  c.n = 1;
  c.is_lagrangian = true;
  c.tangent_frame = [](const Eigen::VectorXcd& z) {
    Eigen::MatrixXcd f(1, 1);
    f(0, 0) = Complex(0, 1) * z[0];
    return Frame(std::move(f));
  };
  c.chart_distance = [radius](const Eigen::VectorXcd& z) {
    return std::abs(std::abs(z[0]) - radius);
  };
  if (mean_curvature_zero) {
    c.mean_curvature = [](const Eigen::VectorXcd& z) {
      return Eigen::VectorXcd::Zero(z.size()).eval();
    };
  } else {
    const double r2 = radius * radius;
    c.mean_curvature = [r2](const Eigen::VectorXcd& z) { return (-z / r2).eval(); };
    if (soliton) c.soliton_constant = -1.0 / r2;
  }
  for (int j = 0; j < 8; ++j) {
    const double a = 2 * kPi * (j + 0.21) / 8;
    Eigen::VectorXcd z(1), v(1);
    z[0] = radius * std::exp(Complex(0, a));
    v[0] = Complex(0, 1) * z[0];
    c.probes.push_back({z, v});
  }
  return c;
}

TotallyRealConstraint TotallyRealConstraint::torus(std::vector<double> radii, bool soliton) {
  const int n = static_cast<int>(radii.size());
  if (n < 1) {
    throw Error(errc::validation_error, "torus constraint needs at least one radius");
  }
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(errc::validation_error, "torus radii must be positive");
  }
  TotallyRealConstraint c;
  c.name = "torus";
  c.n = n;
  c.is_lagrangian = true;
  c.tangent_frame = [n](const Eigen::VectorXcd& z) {
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) f(j, j) = Complex(0, 1) * z[j];
    return Frame(std::move(f));
  };
  c.chart_distance = [radii](const Eigen::VectorXcd& z) {
    double d = 0.0;
    for (size_t j = 0; j < radii.size(); ++j) {
      d = std::max(d, std::abs(std::abs(z[j]) - radii[j]));
    }
    return d;
  };
  c.mean_curvature = [radii](const Eigen::VectorXcd& z) {
    Eigen::VectorXcd h(z.size());
    for (size_t j = 0; j < radii.size(); ++j) h[j] = -z[j] / (radii[j] * radii[j]);
    return h;
  };
  if (soliton) {
    bool equal = true;
    for (double r : radii) equal = equal && std::abs(r - radii[0]) < 1e-14;
    if (!equal) {
      throw Error(errc::validation_error, "torus self-shrinkers need equal radii");
    }
    c.soliton_constant = -1.0 / (radii[0] * radii[0]);
  }
  for (int j = 0; j < 8; ++j) {
    Eigen::VectorXcd z(n), v(n);
    for (int i = 0; i < n; ++i) {
      const double a = 2 * kPi * (j + 0.37 * (i + 1)) / 8;
      z[i] = radii[i] * std::exp(Complex(0, a));
      v[i] = Complex(0, 1) * z[i] * (i == 0 ? 1.0 : 0.3);
    }
    c.probes.push_back({z, v});
  }
  return c;
}

TotallyRealConstraint TotallyRealConstraint::real_plane(int n) {
  TotallyRealConstraint c;
  c.name = "real_plane";
  c.n = n;
  c.is_lagrangian = true;
  c.tangent_frame = [n](const Eigen::VectorXcd&) {
    return Frame(Eigen::MatrixXcd::Identity(n, n).eval());
  };
  c.chart_distance = [](const Eigen::VectorXcd& z) { return z.imag().cwiseAbs().maxCoeff(); };
  c.mean_curvature = [n](const Eigen::VectorXcd&) { return Eigen::VectorXcd::Zero(n).eval(); };
  for (int j = 0; j < 4; ++j) {
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n), v = Eigen::VectorXcd::Zero(n);
    z[0] = 0.3 * j - 0.5;
    v[0] = 1.0;
    if (n > 1) v[1] = 0.7;
    c.probes.push_back({z, v});
  }
  return c;
}

void TotallyRealConstraint::validate(const KahlerModel& model) const {
  if (n != model.n) {
    throw Error(errc::dimension_mismatch, "constraint dimension does not match the model");
  }
  for (const auto& [z, v] : probes) {
    const Frame f = tangent_frame(z);
    wedge_norm_sq(f, HermitianForm(model.metric_at(z), false));  // totally real
    if (is_lagrangian) {
      for (int i = 0; i < f.rank(); ++i) {
        for (int j = i + 1; j < f.rank(); ++j) {
          if (std::abs(model.omega(z, f.vectors.col(i), f.vectors.col(j))) > 1e-9) {
            throw Error(errc::validation_error, "constraint flagged Lagrangian but omega|_TL != 0");
          }
        }
      }
    }
    if (soliton_constant && mean_curvature) {
      const Eigen::VectorXcd h = (*mean_curvature)(z);
      const double lhs = model.omega(z, h, v);
      // lambda = (1/2) sum (x dy - y dx); lambda(v) = (1/2) Im(sum conj(z_j) v_j)
      const double lam = 0.5 * ((z.conjugate().array() * v.array()).sum()).imag();
      const double rhs = 2.0 * (*soliton_constant) * lam;
      if (std::abs(lhs - rhs) > 1e-6 * (1.0 + std::abs(lhs))) {
        throw Error(errc::validation_error, "soliton identity omega(H,.) = 2c lambda fails");
      }
    }
  }
}

ChartLoop immersed_boundary_loop(const ImmersedSurface& immersed, int index) {
  if (index < 0 || index >= static_cast<int>(immersed.surface->boundary_loops.size())) {
    throw Error(errc::validation_error, "boundary loop index out of range");
  }
  const ImmersedSurface im = immersed;  // shallow: shared surface + callables
  ChartLoop out;
  out.position = [im, index](double t) {
    const BoundaryLoop& loop = im.surface->boundary_loops[index];
    const Eigen::Vector2d p = loop.position(t);
    return im.map(RefPoint{p.x(), p.y(), loop.chart});
  };
  out.velocity = [im, index](double t) {
    const BoundaryLoop& loop = im.surface->boundary_loops[index];
    const Eigen::Vector2d p = loop.position(t);
    const Eigen::Vector2d v = loop.velocity(t);
    auto [du, dv] = im.differential(RefPoint{p.x(), p.y(), loop.chart});
    return (du * v.x() + dv * v.y()).eval();
  };
  return out;
}

BundlePair pullback_pair(const KahlerModel& model, const ImmersedSurface& immersed,
                         const TotallyRealConstraint& constraint) {
  immersed.validate(model);
  constraint.validate(model);
  BundlePair pair;
  pair.surface = immersed.surface;
  pair.k = model.n;
  pair.connection.k = model.n;
  pair.connection.unitary = true;
  const KahlerModel model_copy = model;
  const ImmersedSurface immersed_copy = immersed;
  pair.connection.coefficients = [model_copy, immersed_copy](const RefPoint& p) {
    const Eigen::VectorXcd z = immersed_copy.map(p);
    const auto gamma = chern_connection(model_copy, z);
    auto [du, dv] = immersed_copy.differential(p);
    Eigen::MatrixXcd ax = Eigen::MatrixXcd::Zero(model_copy.n, model_copy.n);
    Eigen::MatrixXcd ay = ax;
    for (int j = 0; j < model_copy.n; ++j) {
      ax += gamma[j] * du[j];
      ay += gamma[j] * dv[j];
    }
    return std::make_pair(ax, ay);
  };
  pair.metric.constant = model.metric_constant;
  pair.metric.at = [model_copy, immersed_copy](const RefPoint& p) {
    return HermitianForm(model_copy.metric_at(immersed_copy.map(p)), false);
  };
  pair.connection.reference_metric = pair.metric;
  const TotallyRealConstraint constraint_copy = constraint;
  for (size_t li = 0; li < immersed.surface->boundary_loops.size(); ++li) {
    const BoundaryLoop& rloop = immersed.surface->boundary_loops[li];
    // Boundary must land on L.
    for (int j = 0; j < 64; ++j) {
      const Eigen::Vector2d p = rloop.position(static_cast<double>(j) / 64);
      const Eigen::VectorXcd z = immersed.map(RefPoint{p.x(), p.y(), rloop.chart});
      if (constraint.chart_distance(z) > 1e-8) {
        throw Error(errc::boundary_off_constraint,
                    "immersed boundary leaves the constraint submanifold");
      }
    }
    BoundaryFrameLoop frames;
    const std::shared_ptr<const RefSurface> surf = pair.surface;
    frames.frame_of = [immersed_copy, constraint_copy, surf, li](double t) {
      const BoundaryLoop& loop = surf->boundary_loops[li];
      const Eigen::Vector2d p = loop.position(t);
      const Eigen::VectorXcd z = immersed_copy.map(RefPoint{p.x(), p.y(), loop.chart});
      return constraint_copy.tangent_frame(z);
    };
    pair.boundary.loops.push_back(std::move(frames));
  }
  return pair;
}

std::vector<double> xi_J(const KahlerModel& model, const TotallyRealConstraint& constraint,
                         const ChartLoop& loop, int samples) {
  const auto theta = theta_along_loop(
      [&](double t) { return constraint.tangent_frame(loop.position(t)); },
      [&](double t) {
        const Eigen::VectorXcd z = loop.position(t);
        const Eigen::VectorXcd v = loop.velocity(t);
        const auto gamma = chern_connection(model, z);
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(model.n, model.n);
        for (int j = 0; j < model.n; ++j) c += gamma[j] * v[j];
        return c;
      },
      [&](double t) { return HermitianForm(model.metric_at(loop.position(t)), false); }, samples);
  std::vector<double> xi(theta.size());
  for (size_t j = 0; j < theta.size(); ++j) xi[j] = -theta[j].imag();
  return xi;
}

double integrate_samples(const std::vector<double>& samples) {
  double acc = 0.0;
  for (double v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

double lagrangian_boundary_term(const KahlerModel& model, const TotallyRealConstraint& constraint,
                                const ChartLoop& loop, int samples) {
  if (!constraint.is_lagrangian) {
    throw Error(errc::unsupported_input, "boundary term needs a Lagrangian constraint");
  }
  if (!constraint.mean_curvature) {
    throw Error(errc::missing_analytic_h, "constraint has no analytic mean curvature");
  }
  double acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double t = static_cast<double>(j) / samples;
    const Eigen::VectorXcd z = loop.position(t);
    acc += model.omega(z, (*constraint.mean_curvature)(z), loop.velocity(t));
  }
  return acc / static_cast<double>(samples);
}

double geodesic_curvature_term(const KahlerModel& model, const ChartLoop& loop, int samples) {
  if (model.n != 1) {
    throw Error(errc::unsupported_input, "geodesic curvature is defined for n = 1 models");
  }
  const double dt = 1.0 / samples;
  auto wrap = [](double t) { return t - std::floor(t); };
  double acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double t = j * dt;
    const Eigen::VectorXcd z = loop.position(t);
    const Complex v = loop.velocity(t)[0];
    const Complex vp2 = loop.velocity(wrap(t + 2 * dt))[0];
    const Complex vp1 = loop.velocity(wrap(t + dt))[0];
    const Complex vm1 = loop.velocity(wrap(t - dt))[0];
    const Complex vm2 = loop.velocity(wrap(t - 2 * dt))[0];
    const Complex dvdt = (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * dt);
    const Complex gamma = chern_connection(model, z)[0](0, 0);
    const Complex cov = dvdt + gamma * v * v;
    const double h = model.metric_at(z)(0, 0).real();
    // k ds pairing: Im h(cov, v) / |v|_g^2 integrates to the geodesic curvature term.
    acc += (h * cov * std::conj(v)).imag() / (h * std::norm(v));
  }
  return acc / static_cast<double>(samples);
}

GeometricMaslovReport maslov_geometric(const KahlerModel& model, const ImmersedSurface& immersed,
                                       const TotallyRealConstraint& constraint,
                                       const QuadratureRule& rule, int boundary_samples,
                                       double tolerance) {
  model.validate();
  const BundlePair pair = pullback_pair(model, immersed, constraint);
  GeometricMaslovReport report;

  const ChernWeilResult cw = maslov_chern_weil(pair, rule, boundary_samples);
  report.mu_pullback_cw = cw.mu;

  const TwoForm ricci_field = [&](const RefPoint& q, const Eigen::Vector2d& u,
                                  const Eigen::Vector2d& v) {
    const Eigen::VectorXcd z = immersed.map(q);
    auto [du, dv] = immersed.differential(q);
    const Eigen::VectorXcd pu = du * u.x() + dv * u.y();
    const Eigen::VectorXcd pv = du * v.x() + dv * v.y();
    return Complex(ricci_form(model, z, pu, pv), 0.0);
  };
  report.ricci_integral = integrate_2form(*immersed.surface, ricci_field, rule).real();

  const TwoForm omega_field = [&](const RefPoint& q, const Eigen::Vector2d& u,
                                  const Eigen::Vector2d& v) {
    const Eigen::VectorXcd z = immersed.map(q);
    auto [du, dv] = immersed.differential(q);
    return Complex(model.omega(z, du * u.x() + dv * u.y(), du * v.x() + dv * v.y()), 0.0);
  };
  report.alpha_L = integrate_2form(*immersed.surface, omega_field, rule).real();

  double xi_total = 0.0;
  double h_total = 0.0;
  const bool has_h = constraint.is_lagrangian && constraint.mean_curvature.has_value();
  for (size_t li = 0; li < immersed.surface->boundary_loops.size(); ++li) {
    const ChartLoop loop = immersed_boundary_loop(immersed, static_cast<int>(li));
    xi_total += integrate_samples(xi_J(model, constraint, loop, boundary_samples));
    if (has_h) {
      h_total += lagrangian_boundary_term(model, constraint, loop, boundary_samples);
    }
  }
  report.xi_integral = xi_total;
  if (has_h) report.boundary_H_term = h_total;

  report.mu_geometric = report.ricci_integral / kPi - xi_total / kPi;

  std::map<std::string, double> routes{{"geom", report.mu_geometric},
                                       {"cw", report.mu_pullback_cw}};
  if (!immersed.surface->closed()) {
    report.mu_topological = maslov_topological(pair, boundary_samples);
    routes["top"] = static_cast<double>(*report.mu_topological);
  }
  const MaslovReport combined = MaslovReport::assemble(routes, tolerance);
  report.mu_rounded = combined.mu_rounded;
  report.residual = combined.residual;
  report.consistent = combined.consistent;
  if (!report.consistent) {
    throw Error(errc::route_disagreement, "Maslov routes disagree by more than twice the tolerance");
  }
  return report;
}

MonotonicityReport monotonicity_report(const KahlerModel& model, const ImmersedSurface& immersed,
                                       const TotallyRealConstraint& constraint,
                                       const QuadratureRule& rule, int boundary_samples,
                                       double tolerance) {
  const GeometricMaslovReport geo =
      maslov_geometric(model, immersed, constraint, rule, boundary_samples, tolerance);
  MonotonicityReport report;
  report.mu = geo.mu_geometric;
  report.alpha_L = geo.alpha_L;
  report.rho_area = geo.ricci_integral;
  report.boundary_H_term = geo.boundary_H_term;
  if (model.einstein_constant && geo.boundary_H_term) {
    report.einstein_residual =
        kPi * report.mu - *model.einstein_constant * report.alpha_L + *geo.boundary_H_term;
  }
  if (constraint.soliton_constant) {
    report.soliton_residual =
        report.mu + (2.0 * *constraint.soliton_constant / kPi) * report.alpha_L;
  }
  // rho-Lagrangian: rho restricted to TL vanishes on the constraint probes.
  bool rho_lag = true;
  for (const auto& [z, v] : constraint.probes) {
    const Frame f = constraint.tangent_frame(z);
    for (int i = 0; i < f.rank() && rho_lag; ++i) {
      for (int j = i + 1; j < f.rank() && rho_lag; ++j) {
        if (std::abs(ricci_form(model, z, f.vectors.col(i), f.vectors.col(j))) > 1e-9) {
          rho_lag = false;
        }
      }
    }
  }
  report.rho_lagrangian = rho_lag;
  if (rho_lag && std::abs(report.rho_area) > 1e-9) {
    report.mu_over_rho_area = report.mu / report.rho_area;
  }
  return report;
}

}  // namespace mcw
