#include "maslovcw/builtins.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

namespace mcw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

BoundaryFrameLoop phase_frame_loop(int rank, long m) {
  BoundaryFrameLoop loop;
  loop.frame_of = [rank, m](double t) {
    const Complex phase = std::exp(Complex(0, kTwoPi * m * t));
    return Frame((phase * Eigen::MatrixXcd::Identity(rank, rank)).eval());
  };
  return loop;
}

Eigen::MatrixXcd random_skew_hermitian(std::mt19937_64& rng, int k, double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd b(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) b(i, j) = Complex(dist(rng), dist(rng));
  }
  return (scale * 0.5 * (b - b.adjoint())).eval();
}

Eigen::MatrixXd random_real(std::mt19937_64& rng, int k, double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd b(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) b(i, j) = dist(rng);
  }
  return scale * b;
}

}  // namespace

ConnectionField make_random_unitary_connection(int rank, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed ^ 0xa5a5a5a5a5a5a5a5ull);
  // Monomial basis x^p y^q, p + q <= 3, with skew-Hermitian coefficients.
  struct Term {
    int p, q;
    Eigen::MatrixXcd sx, sy;
  };
  std::vector<Term> terms;
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; p + q <= 3; ++q) {
      const double scale = amplitude / (1.0 + p + q) / rank;
      terms.push_back({p, q, random_skew_hermitian(rng, rank, scale),
                       random_skew_hermitian(rng, rank, scale)});
    }
  }
  ConnectionField field;
  field.k = rank;
  field.unitary = true;
  field.reference_metric = MetricField::identity(rank);
  field.coefficients = [terms, rank](const RefPoint& pt) {
    Eigen::MatrixXcd ax = Eigen::MatrixXcd::Zero(rank, rank);
    Eigen::MatrixXcd ay = ax;
    for (const Term& term : terms) {
      const double mono = std::pow(pt.x, term.p) * std::pow(pt.y, term.q);
      ax += mono * term.sx;
      ay += mono * term.sy;
    }
    return std::make_pair(ax, ay);
  };
  return field;
}

MetricField make_perturbed_metric(int rank, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ull);
  std::normal_distribution<double> dist(0.0, 1.0);
  const double a1 = dist(rng), a2 = dist(rng), a3 = dist(rng);
  Eigen::MatrixXcd b1(rank, rank), b2(rank, rank);
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) {
      b1(i, j) = Complex(dist(rng), dist(rng));
      b2(i, j) = Complex(dist(rng), dist(rng));
    }
  }
  b1 *= amplitude / (2.0 * rank);
  b2 *= amplitude / (2.0 * rank);
  MetricField field;
  field.constant = false;
  field.at = [=](const RefPoint& pt) {
    // Conformal factor times a congruence of the identity.
    const double f = amplitude * (0.5 * std::sin(a1 * pt.x + a2 * pt.y) + 0.3 * a3 * pt.x * pt.y);
    const Eigen::MatrixXcd g =
        Eigen::MatrixXcd::Identity(rank, rank) + pt.x * b1 + pt.y * b2;
    return HermitianForm((std::exp(2.0 * f) * (g.adjoint() * g)).eval(), false);
  };
  return field;
}

RandomPair make_random_pair(std::shared_ptr<const RefSurface> surface, int rank,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> winding(-3, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  RandomPair result;
  result.pair.surface = surface;
  result.pair.k = rank;
  result.pair.metric = MetricField::identity(rank);
  result.pair.connection = make_random_unitary_connection(rank, rng(), 0.35);
  result.exact_mu = 0;
  for (const auto& surf_loop : surface->boundary_loops) {
    (void)surf_loop;
    std::vector<long> m(rank);
    for (int j = 0; j < rank; ++j) {
      m[j] = winding(rng);
      result.exact_mu += 2 * m[j];
    }
    const Eigen::MatrixXd gen = random_real(rng, rank, 0.4 / rank);
    const double phase0 = kTwoPi * unit(rng);
    const double phase1 = kTwoPi * unit(rng);
    BoundaryFrameLoop loop;
    loop.frame_of = [m, gen, phase0, phase1, rank](double t) {
      const double s = 1.0 + 0.3 * std::cos(kTwoPi * t + phase1);
      const Eigen::MatrixXd basis_change = (std::sin(kTwoPi * t + phase0) * gen).exp();
      Eigen::MatrixXcd frame = basis_change.cast<Complex>();
      for (int j = 0; j < rank; ++j) {
        frame.row(j) *= std::exp(Complex(0, kTwoPi * m[j] * t));
      }
      return Frame((s * frame).eval());
    };
    result.pair.boundary.loops.push_back(std::move(loop));
  }
  return result;
}

BundlePair make_builtin_pair(const PairSpec& spec, std::shared_ptr<const RefSurface> surface) {
  BundlePair pair;
  pair.surface = surface;
  pair.k = spec.rank;
  pair.connection = ConnectionField::flat(spec.rank);
  pair.metric = MetricField::identity(spec.rank);

  const size_t n_loops = surface->boundary_loops.size();
  if (spec.name == "disk_example") {
    pair.k = 1;
    pair.connection = ConnectionField::flat(1);
    pair.metric = MetricField::identity(1);
    BoundaryFrameLoop loop;
    loop.frame_of = [](double t) {
      Eigen::MatrixXcd f(1, 1);
      f(0, 0) = Complex(0, 1) * std::exp(Complex(0, kTwoPi * t));
      return Frame(std::move(f));
    };
    pair.boundary.loops.push_back(std::move(loop));
  } else if (spec.name == "trivial") {
    for (size_t i = 0; i < n_loops; ++i) {
      BoundaryFrameLoop loop;
      const int rank = spec.rank;
      loop.frame_of = [rank](double) {
        return Frame(Eigen::MatrixXcd::Identity(rank, rank).eval());
      };
      pair.boundary.loops.push_back(std::move(loop));
    }
  } else if (spec.name == "rank1_winding") {
    pair.k = 1;
    pair.connection = ConnectionField::flat(1);
    pair.metric = MetricField::identity(1);
    for (size_t i = 0; i < n_loops; ++i) {
      pair.boundary.loops.push_back(phase_frame_loop(1, i == 0 ? spec.m : 0));
    }
  } else if (spec.name == "rankk_winding") {
    for (size_t i = 0; i < n_loops; ++i) {
      pair.boundary.loops.push_back(phase_frame_loop(spec.rank, i == 0 ? spec.m : 0));
    }
  } else if (spec.name == "annulus_winding") {
    if (n_loops != 2) {
      throw Error(errc::validation_error, "annulus_winding needs an annulus surface");
    }
    pair.k = 1;
    pair.connection = ConnectionField::flat(1);
    pair.metric = MetricField::identity(1);
    pair.boundary.loops.push_back(phase_frame_loop(1, spec.m_outer));
    pair.boundary.loops.push_back(phase_frame_loop(1, spec.m_inner));
  } else if (spec.name == "random") {
    return make_random_pair(surface, spec.rank, spec.seed).pair;
  } else if (spec.name == "closed_degree") {
    if (!surface->closed()) {
      throw Error(errc::validation_error, "closed_degree needs the closed sphere surface");
    }
    pair.k = 1;
    pair.metric = MetricField::identity(1);
    pair.connection.k = 1;
    pair.connection.unitary = true;
    pair.connection.reference_metric = MetricField::identity(1);
    const double d = static_cast<double>(spec.degree);
    // Degree-d monopole connection, same shape in both charts; the total
    // curvature integral is -2 pi i d.
    pair.connection.coefficients = [d](const RefPoint& p) {
      const double denom = 1.0 + p.x * p.x + p.y * p.y;
      Eigen::MatrixXcd ax(1, 1), ay(1, 1);
      ax(0, 0) = Complex(0, d * p.y / denom);
      ay(0, 0) = Complex(0, -d * p.x / denom);
      return std::make_pair(ax, ay);
    };
  } else {
    throw Error(errc::validation_error, "unknown builtin pair '" + spec.name + "'");
  }
  return pair;
}

KahlerModel make_builtin_model(const ModelSpec& spec) {
  if (spec.name == "flat_Cn") return KahlerModel::flat_cn(spec.n);
  if (spec.name == "fubini_study_CP1") return KahlerModel::fubini_study_cpn(1);
  if (spec.name == "fubini_study_CPn") return KahlerModel::fubini_study_cpn(spec.n);
  if (spec.name == "round_sphere") return KahlerModel::round_sphere(spec.radius);
  throw Error(errc::validation_error, "unknown builtin model '" + spec.name + "'");
}

ImmersedSurface make_builtin_immersion(const ImmersionSpec& spec, const ModelSpec& model_spec,
                                       std::shared_ptr<const RefSurface> surface) {
  ImmersedSurface out;
  out.surface = surface;
  const double scale = spec.scale;
  const int n = model_spec.n;

  if (spec.name == "scaled_identity" || spec.name == "chart_identity") {
    if (n != 1) {
      throw Error(errc::validation_error, spec.name + " immersion targets n = 1 models");
    }
    out.map = [scale](const RefPoint& p) {
      Eigen::VectorXcd z(1);
      z[0] = scale * Complex(p.x, p.y);
      return z;
    };
    out.jacobian = [scale](const RefPoint&) {
      Eigen::VectorXcd dx(1), dy(1);
      dx[0] = scale;
      dy[0] = Complex(0, scale);
      return std::make_pair(dx, dy);
    };
  } else if (spec.name == "torus_slice") {
    if (static_cast<int>(spec.radii.size()) != n || n < 1) {
      throw Error(errc::validation_error, "torus_slice needs one radius per model dimension");
    }
    const std::vector<double> radii = spec.radii;
    out.map = [radii, scale, n](const RefPoint& p) {
      Eigen::VectorXcd z(n);
      z[0] = radii[0] * scale * Complex(p.x, p.y);
      for (int j = 1; j < n; ++j) z[j] = radii[j] * scale;
      return z;
    };
    out.jacobian = [radii, scale, n](const RefPoint&) {
      Eigen::VectorXcd dx = Eigen::VectorXcd::Zero(n), dy = Eigen::VectorXcd::Zero(n);
      dx[0] = radii[0] * scale;
      dy[0] = Complex(0, radii[0] * scale);
      return std::make_pair(dx, dy);
    };
  } else if (spec.name == "real_slice") {
    if (n != 2) {
      throw Error(errc::validation_error, "real_slice targets n = 2 models");
    }
    out.map = [scale](const RefPoint& p) {
      Eigen::VectorXcd z(2);
      z[0] = scale * p.x;
      z[1] = scale * p.y;
      return z;
    };
    out.jacobian = [scale](const RefPoint&) {
      Eigen::VectorXcd dx = Eigen::VectorXcd::Zero(2), dy = Eigen::VectorXcd::Zero(2);
      dx[0] = scale;
      dy[1] = scale;
      return std::make_pair(dx, dy);
    };
  } else {
    throw Error(errc::validation_error, "unknown builtin immersion '" + spec.name + "'");
  }

  if (spec.bump_amplitude > 0.0) {
    // Interior perturbation vanishing to second order at the reference boundary.
    std::mt19937_64 rng(spec.seed ^ 0xc2b2ae3d27d4eb4full);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXcd c0(n), c1(n);
    double norm = 0.0;
    for (int j = 0; j < n; ++j) {
      c0[j] = Complex(dist(rng), dist(rng));
      c1[j] = Complex(dist(rng), dist(rng));
      norm = std::max({norm, std::abs(c0[j]), std::abs(c1[j])});
    }
    c0 /= norm;
    c1 /= norm;
    const double amp = spec.bump_amplitude;
    auto base = out.map;
    out.map = [base, c0, c1, amp](const RefPoint& p) {
      const double r2 = p.x * p.x + p.y * p.y;
      const double cut = std::max(0.0, 1.0 - r2);
      const double bump = amp * cut * cut * cut;
      return (base(p) + bump * (c0 + Complex(p.x, p.y) * c1)).eval();
    };
    out.jacobian.reset();  // finite differences once perturbed
  }
  return out;
}

TotallyRealConstraint make_builtin_constraint(const ConstraintSpec& spec,
                                              const ModelSpec& model_spec) {
  TotallyRealConstraint constraint;
  if (spec.name == "circle") {
    constraint = TotallyRealConstraint::circle(spec.radius, spec.mean_curvature_zero, spec.soliton);
  } else if (spec.name == "torus") {
    constraint = TotallyRealConstraint::torus(spec.radii, spec.soliton);
  } else if (spec.name == "real_plane") {
    constraint = TotallyRealConstraint::real_plane(model_spec.n);
  } else if (spec.name == "none") {
    // Closed scenarios carry no boundary constraint.
    constraint.name = "none";
    constraint.n = model_spec.n;
    constraint.tangent_frame = [n = model_spec.n](const Eigen::VectorXcd&) {
      return Frame(Eigen::MatrixXcd::Identity(n, n).eval());
    };
    constraint.chart_distance = [](const Eigen::VectorXcd&) { return 0.0; };
  } else {
    throw Error(errc::validation_error, "unknown builtin constraint '" + spec.name + "'");
  }
  if (spec.drop_mean_curvature) {
    constraint.mean_curvature.reset();
    constraint.soliton_constant.reset();
  }
  return constraint;
}

std::vector<std::string> builtin_summaries() {
  return {
      "pair disk_example            unit disk, F = T S^1, flat connection (mu = 2)",
      "pair trivial                 constant frame, flat connection (mu = 0)",
      "pair rank1_winding m=M       frame e^{i M psi} (mu = 2M)",
      "pair rankk_winding rank=K m=M  frame e^{i M psi} I_K (mu = 2MK)",
      "pair annulus_winding m_outer m_inner  (mu = 2(m_outer + m_inner))",
      "pair random rank=K seed=S    seeded random pair, |windings| <= 3, degree-3 unitary A",
      "pair closed_degree degree=D  degree-D monopole over the two-chart sphere (mu = 2D)",
      "model flat_Cn n=N            flat metric on C^N",
      "model fubini_study_CP1       Fubini-Study chart, rho = 2 omega",
      "model round_sphere radius=R  round metric, rho = omega / R^2",
      "immersion scaled_identity scale=S",
      "immersion torus_slice radii=[..] scale=S",
      "immersion real_slice scale=S",
      "immersion chart_identity     (two-chart sphere)",
      "constraint circle radius=R [mean_curvature_zero] [soliton]",
      "constraint torus radii=[..] [soliton]",
      "constraint real_plane",
  };
}

}  // namespace mcw
