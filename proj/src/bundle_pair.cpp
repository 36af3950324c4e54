#include "maslovcw/bundle_pair.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace mcw {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd real_stack(const Eigen::MatrixXcd& s) {
  Eigen::MatrixXd out(2 * s.rows(), s.cols());
  out.topRows(s.rows()) = s.real();
  out.bottomRows(s.rows()) = s.imag();
  return out;
}

// Orthogonal projector onto the real span of the frame columns.
Eigen::MatrixXd real_span_projector(const Eigen::MatrixXcd& s) {
  const Eigen::MatrixXd r = real_stack(s);
  return r * (r.transpose() * r).inverse() * r.transpose();
}

double wrap_param(double t) {
  double w = t - std::floor(t);
  return w;
}

// Velocity-contracted connection matrix along a boundary loop.
Eigen::MatrixXcd contracted_connection(const BundlePair& pair, const BoundaryLoop& loop,
                                       double t) {
  const Eigen::Vector2d p = loop.position(t);
  const Eigen::Vector2d v = loop.velocity(t);
  const RefPoint point{p.x(), p.y(), loop.chart};
  auto [ax, ay] = pair.connection.coefficients(point);
  return ax * v.x() + ay * v.y();
}

void check_unitarity(const BundlePair& pair, const BoundaryLoop& loop) {
  if (!pair.connection.unitary) {
    throw Error(errc::not_unitary, "connection is not flagged h-unitary");
  }
  const MetricField& reference =
      pair.connection.reference_metric ? *pair.connection.reference_metric : pair.metric;
  const int probes = 8;
  for (int i = 0; i < probes; ++i) {
    const double t = (i + 0.37) / probes;
    const Eigen::Vector2d p = loop.position(t);
    const RefPoint point{p.x(), p.y(), loop.chart};
    auto [ax, ay] = pair.connection.coefficients(point);
    const Eigen::MatrixXcd h = reference.at(point).matrix;
    if (reference.constant) {
      // h-skew-Hermitian: A^T h + h conj(A) = 0.
      const double scale = 1.0 + ax.norm() + ay.norm();
      const double rx = (ax.transpose() * h + h * ax.conjugate()).norm();
      const double ry = (ay.transpose() * h + h * ay.conjugate()).norm();
      if (rx > 1e-10 * scale || ry > 1e-10 * scale) {
        throw Error(errc::not_unitary, "connection is not h-skew-Hermitian at the boundary");
      }
    } else {
      // Varying metric: compatibility d h = A^T h + h conj(A), finite differences.
      const double step = 1e-4;
      auto metric_at = [&](double x, double y) {
        return reference.at(RefPoint{x, y, point.chart}).matrix;
      };
      const Eigen::MatrixXcd dhx =
          (metric_at(p.x() + step, p.y()) - metric_at(p.x() - step, p.y())) / (2 * step);
      const Eigen::MatrixXcd dhy =
          (metric_at(p.x(), p.y() + step) - metric_at(p.x(), p.y() - step)) / (2 * step);
      const double scale = 1.0 + h.norm() * (ax.norm() + ay.norm());
      const double rx = (dhx - ax.transpose() * h - h * ax.conjugate()).norm();
      const double ry = (dhy - ay.transpose() * h - h * ay.conjugate()).norm();
      if (rx > 1e-6 * scale || ry > 1e-6 * scale) {
        throw Error(errc::not_unitary, "connection is not compatible with the metric field");
      }
    }
  }
}

// Determinant of the frame on a coordinate row subset.
Complex projected_det(const Eigen::MatrixXcd& s, const std::vector<int>& rows) {
  const int k = static_cast<int>(s.cols());
  Eigen::MatrixXcd sq(k, k);
  for (int i = 0; i < k; ++i) sq.row(i) = s.row(rows[i]);
  return sq.determinant();
}

std::vector<std::vector<int>> row_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    out.push_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<int> best_subset(const Eigen::MatrixXcd& s,
                             const std::vector<std::vector<int>>& subsets, double* best_abs) {
  const std::vector<int>* best = nullptr;
  double best_val = -1.0;
  for (const auto& sub : subsets) {
    const double a = std::abs(projected_det(s, sub));
    if (a > best_val) {
      best_val = a;
      best = &sub;
    }
  }
  *best_abs = best_val;
  return *best;
}

// Winding of det^2 with projection anchoring for k < n.
int anchored_winding(const std::function<Frame(double)>& frame_of, int n, int k, int samples) {
  const auto subsets = row_subsets(n, k);
  double scale = 0.0;
  for (int j = 0; j < samples; ++j) {
    scale = std::max(scale, frame_of(static_cast<double>(j) / samples).vectors.norm());
  }
  double anchor_abs = 0.0;
  std::vector<int> subset = best_subset(frame_of(0.0).vectors, subsets, &anchor_abs);
  if (anchor_abs < 1e-10 * std::pow(scale, k)) {
    throw Error(errc::projection_degenerate,
                "no coordinate subspace keeps the projected determinant away from zero");
  }
  double total = 0.0;
  double running_max = anchor_abs;
  Complex prev = projected_det(frame_of(0.0).vectors, subset);
  for (int j = 1; j <= samples; ++j) {
    const double t = static_cast<double>(j % samples) / samples;
    const Eigen::MatrixXcd s = frame_of(t).vectors;
    Complex cur = projected_det(s, subset);
    const double jump = 2.0 * std::arg(cur / prev);
    if (!(std::abs(jump) < kPi / 2)) {
      throw Error(errc::need_refinement, "projected determinant phase jump exceeds pi/2");
    }
    total += jump;
    running_max = std::max(running_max, std::abs(cur));
    if (std::abs(cur) < 0.1 * running_max) {
      // Re-anchor on the best subset at this parameter and stitch the phase.
      double best_abs = 0.0;
      subset = best_subset(s, subsets, &best_abs);
      if (best_abs < 1e-10 * std::pow(scale, k)) {
        throw Error(errc::projection_degenerate, "projected determinant decayed on all subsets");
      }
      cur = projected_det(s, subset);
      running_max = std::abs(cur);
    }
    prev = cur;
  }
  const double turns = total / (2 * kPi);
  if (std::abs(turns - std::round(turns)) > 1e-9) {
    throw Error(errc::need_refinement, "projected winding does not close to an integer");
  }
  return static_cast<int>(std::round(turns));
}

}  // namespace

ConnectionField ConnectionField::flat(int k) {
  ConnectionField field;
  field.k = k;
  field.unitary = true;
  field.reference_metric = MetricField::identity(k);
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(k, k);
  field.coefficients = [zero](const RefPoint&) { return std::make_pair(zero, zero); };
  return field;
}

MetricField MetricField::identity(int k) {
  MetricField field;
  field.constant = true;
  const HermitianForm h = HermitianForm::identity(k);
  field.at = [h](const RefPoint&) { return h; };
  return field;
}

void BundlePair::validate(int probe_samples) const {
  if (!surface) {
    throw Error(errc::validation_error, "bundle pair has no surface");
  }
  if (connection.k != k) {
    throw Error(errc::dimension_mismatch, "connection rank does not match the pair rank");
  }
  if (boundary.loops.size() != surface->boundary_loops.size()) {
    throw Error(errc::validation_error,
                "boundary frame loops do not match the surface boundary loops one-to-one");
  }
  for (size_t li = 0; li < boundary.loops.size(); ++li) {
    const auto& loop = boundary.loops[li];
    for (int j = 0; j < probe_samples; ++j) {
      const double t = static_cast<double>(j) / probe_samples;
      const Frame f = loop.frame_of(t);
      if (f.rank() != k) {
        throw Error(errc::dimension_mismatch, "boundary frame rank does not match the pair rank");
      }
      const Eigen::Vector2d p = surface->boundary_loops[li].position(t);
      const RefPoint point{p.x(), p.y(), surface->boundary_loops[li].chart};
      wedge_norm_sq(f, metric.at(point));  // throws DegenerateFrame if totally real fails
    }
    const Eigen::MatrixXcd s0 = loop.frame_of(0.0).vectors;
    const Eigen::MatrixXcd s1 = loop.frame_of(1.0).vectors;
    const double dist = (real_span_projector(s0) - real_span_projector(s1)).norm();
    if (dist > 1e-9) {
      throw Error(errc::validation_error, "boundary frame loop is not periodic (span mismatch)");
    }
    // Orientability of F: the closing real basis change must have det > 0.
    const Eigen::MatrixXd r0 = real_stack(s0);
    const Eigen::MatrixXd r1 = real_stack(s1);
    const Eigen::MatrixXd b = (r0.transpose() * r0).ldlt().solve(r0.transpose() * r1);
    if (b.determinant() < 0.0) {
      throw Error(errc::unsupported_input, "non-orientable totally real boundary data");
    }
  }
}

Complex curvature_trace(const BundlePair& pair, const RefPoint& point, double step) {
  if (step < 1e-9) {
    throw Error(errc::step_underflow, "finite-difference step collapsed below 1e-9");
  }
  auto trace_at = [&](double x, double y) {
    auto [ax, ay] = pair.connection.coefficients(RefPoint{x, y, point.chart});
    return std::make_pair(ax.trace(), ay.trace());
  };
  const Complex tr_yp = trace_at(point.x + step, point.y).second;
  const Complex tr_ym = trace_at(point.x - step, point.y).second;
  const Complex tr_xu = trace_at(point.x, point.y + step).first;
  const Complex tr_xd = trace_at(point.x, point.y - step).first;
  const Complex d_try_dx = (tr_yp - tr_ym) / (2 * step);
  const Complex d_trx_dy = (tr_xu - tr_xd) / (2 * step);
  // tr(A ^ A) vanishes identically; verify at the evaluation point.
  auto [ax, ay] = pair.connection.coefficients(point);
  const Complex comm = (ax * ay - ay * ax).trace();
  if (std::abs(comm) > 1e-10 * (1.0 + ax.norm() * ay.norm())) {
    throw Error(errc::validation_error, "tr(A ^ A) does not vanish");
  }
  return d_try_dx - d_trx_dy;
}

std::vector<Complex> theta_along_loop(const std::function<Frame(double)>& frame_of,
                                      const std::function<Eigen::MatrixXcd(double)>& connection_of,
                                      const std::function<HermitianForm(double)>& metric_of,
                                      int samples) {
  if (samples < 8) {
    throw Error(errc::validation_error, "theta sampling needs at least 8 samples");
  }
  const double dt = 1.0 / samples;
  std::vector<Complex> theta(samples);
  for (int j = 0; j < samples; ++j) {
    const double t = j * dt;
    const Frame frame = frame_of(t);
    // 4th-order central differences of the frame columns in t.
    const Eigen::MatrixXcd sp2 = frame_of(wrap_param(t + 2 * dt)).vectors;
    const Eigen::MatrixXcd sp1 = frame_of(wrap_param(t + dt)).vectors;
    const Eigen::MatrixXcd sm1 = frame_of(wrap_param(t - dt)).vectors;
    const Eigen::MatrixXcd sm2 = frame_of(wrap_param(t - 2 * dt)).vectors;
    Eigen::MatrixXcd derivs = (-sp2 + 8.0 * sp1 - 8.0 * sm1 + sm2) / (12.0 * dt);
    derivs += connection_of(t) * frame.vectors;
    theta[j] = theta_of_velocity(frame, derivs, metric_of(t));
  }
  return theta;
}

std::vector<Complex> boundary_theta(const BundlePair& pair, int loop_index, int samples) {
  if (loop_index < 0 || loop_index >= static_cast<int>(pair.boundary.loops.size())) {
    throw Error(errc::validation_error, "boundary loop index out of range");
  }
  const BoundaryLoop& loop = pair.surface->boundary_loops[loop_index];
  check_unitarity(pair, loop);
  const auto& frames = pair.boundary.loops[loop_index];
  return theta_along_loop(
      frames.frame_of, [&](double t) { return contracted_connection(pair, loop, t); },
      [&](double t) {
        const Eigen::Vector2d p = loop.position(t);
        return pair.metric.at(RefPoint{p.x(), p.y(), loop.chart});
      },
      samples);
}

ChernWeilResult maslov_chern_weil(const BundlePair& pair, const QuadratureRule& rule,
                                  int boundary_samples) {
  pair.validate();
  const TwoForm field = [&](const RefPoint& q, const Eigen::Vector2d& u,
                            const Eigen::Vector2d& v) {
    const double cross = u.x() * v.y() - u.y() * v.x();
    return curvature_trace(pair, q) * cross;
  };
  const Complex curv_integral = integrate_2form(*pair.surface, field, rule);
  Complex theta_integral = 0.0;
  for (size_t li = 0; li < pair.boundary.loops.size(); ++li) {
    const auto theta = boundary_theta(pair, static_cast<int>(li), boundary_samples);
    Complex acc = 0.0;
    for (const Complex& v : theta) acc += v;
    theta_integral += acc / static_cast<double>(boundary_samples);
  }
  ChernWeilResult result;
  result.curvature_part = -curv_integral.imag() / kPi;
  result.boundary_part = theta_integral.imag() / kPi;
  result.mu = result.curvature_part + result.boundary_part;
  return result;
}

int maslov_topological(const BundlePair& pair, int samples) {
  pair.validate();
  if (pair.surface->closed()) {
    throw Error(errc::unsupported_input,
                "topological route needs a boundary; closed surfaces use the curvature integral");
  }
  int total = 0;
  for (const auto& loop : pair.boundary.loops) {
    const Frame probe = loop.frame_of(0.0);
    const int n = probe.dim();
    if (n == pair.k) {
      Eigen::VectorXcd dets(samples);
      for (int j = 0; j < samples; ++j) {
        const Complex d = loop.frame_of(static_cast<double>(j) / samples).vectors.determinant();
        dets[j] = d * d;
      }
      total += winding_number(PhaseTrack::from_samples(std::move(dets)));
    } else {
      total += anchored_winding(loop.frame_of, n, pair.k, samples);
    }
  }
  return total;
}

BundlePair conjugate_pair(const BundlePair& pair) {
  BundlePair out = pair;
  auto coeffs = pair.connection.coefficients;
  out.connection.coefficients = [coeffs](const RefPoint& p) {
    auto [ax, ay] = coeffs(p);
    return std::make_pair(ax.conjugate().eval(), ay.conjugate().eval());
  };
  auto conjugate_metric = [](const MetricField& field) {
    MetricField out_field = field;
    auto at = field.at;
    out_field.at = [at](const RefPoint& p) {
      return HermitianForm(at(p).matrix.conjugate(), false);
    };
    return out_field;
  };
  out.metric = conjugate_metric(pair.metric);
  if (pair.connection.reference_metric) {
    out.connection.reference_metric = conjugate_metric(*pair.connection.reference_metric);
  }
  out.boundary.loops.clear();
  for (const auto& loop : pair.boundary.loops) {
    BoundaryFrameLoop conj = loop;
    auto frame_of = loop.frame_of;
    conj.frame_of = [frame_of](double t) {
      Frame f = frame_of(t);
      f.vectors = f.vectors.conjugate();
      return f;
    };
    out.boundary.loops.push_back(std::move(conj));
  }
  return out;
}

BundlePair det_pair(const BundlePair& pair) {
  if (pair.boundary.loops.size() > 0 && pair.boundary.loops[0].frame_of(0.0).dim() != pair.k) {
    throw Error(errc::unsupported_input, "det_pair needs frames of full coordinate dimension");
  }
  BundlePair out;
  out.surface = pair.surface;
  out.k = 1;
  out.connection.k = 1;
  out.connection.unitary = pair.connection.unitary;
  auto coeffs = pair.connection.coefficients;
  out.connection.coefficients = [coeffs](const RefPoint& p) {
    auto [ax, ay] = coeffs(p);
    Eigen::MatrixXcd tx(1, 1), ty(1, 1);
    tx(0, 0) = ax.trace();
    ty(0, 0) = ay.trace();
    return std::make_pair(tx, ty);
  };
  auto det_metric = [](const MetricField& field) {
    MetricField out_field;
    out_field.constant = field.constant;
    auto at = field.at;
    out_field.at = [at](const RefPoint& p) {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = Complex(at(p).matrix.determinant().real(), 0.0);
      return HermitianForm(std::move(m), false);
    };
    return out_field;
  };
  out.metric = det_metric(pair.metric);
  if (pair.connection.reference_metric) {
    out.connection.reference_metric = det_metric(*pair.connection.reference_metric);
  }
  for (const auto& loop : pair.boundary.loops) {
    BoundaryFrameLoop det_loop;
    det_loop.orientation = loop.orientation;
    auto frame_of = loop.frame_of;
    det_loop.frame_of = [frame_of](double t) {
      Eigen::MatrixXcd d(1, 1);
      d(0, 0) = frame_of(t).vectors.determinant();
      return Frame(std::move(d));
    };
    out.boundary.loops.push_back(std::move(det_loop));
  }
  return out;
}

BundlePair reverse_orientation(const BundlePair& pair) {
  auto reversed = std::make_shared<RefSurface>(*pair.surface);
  for (auto& tri : reversed->triangles) std::swap(tri[1], tri[2]);
  for (auto& loop : reversed->boundary_loops) {
    auto pos = loop.position;
    auto vel = loop.velocity;
    loop.position = [pos](double t) { return pos(wrap_param(1.0 - t)); };
    loop.velocity = [vel](double t) { return (-vel(wrap_param(1.0 - t))).eval(); };
    std::reverse(loop.mesh_vertices.begin(), loop.mesh_vertices.end());
  }
  BundlePair out = pair;
  out.surface = reversed;
  out.boundary.loops.clear();
  for (const auto& loop : pair.boundary.loops) {
    BoundaryFrameLoop rev = loop;
    auto frame_of = loop.frame_of;
    rev.frame_of = [frame_of](double t) { return frame_of(wrap_param(1.0 - t)); };
    out.boundary.loops.push_back(std::move(rev));
  }
  return out;
}

MaslovReport MaslovReport::assemble(const std::map<std::string, double>& by_route,
                                    double tolerance, std::map<std::string, double> components) {
  if (by_route.empty()) {
    throw Error(errc::validation_error, "cannot assemble a report without routes");
  }
  MaslovReport report;
  report.mu_by_route = by_route;
  report.components = std::move(components);
  double sum = 0.0;
  for (const auto& entry : by_route) sum += entry.second;
  report.mu_rounded = std::lround(sum / static_cast<double>(by_route.size()));
  double lo = by_route.begin()->second, hi = lo;
  for (const auto& entry : by_route) {
    const double value = entry.second;
    report.residual =
        std::max(report.residual, std::abs(value - static_cast<double>(report.mu_rounded)));
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  report.consistent = (hi - lo) < 2 * tolerance;
  return report;
}

MaslovReport maslov_report(const BundlePair& pair, const QuadratureRule& rule,
                           int boundary_samples, double tolerance) {
  std::map<std::string, double> routes;
  std::map<std::string, double> components;
  const ChernWeilResult cw = maslov_chern_weil(pair, rule, boundary_samples);
  routes["cw"] = cw.mu;
  components["int_curvature"] = cw.curvature_part;
  components["int_boundary"] = cw.boundary_part;
  if (!pair.surface->closed()) {
    routes["top"] = static_cast<double>(maslov_topological(pair, boundary_samples));
  }
  return MaslovReport::assemble(routes, tolerance, std::move(components));
}

}  // namespace mcw
