// Acceptance suite: runs every exit criterion at its stated tolerance and
// prints one pass/fail line each. Exit status is the number of failures.

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "maslovcw/scenario.hpp"

using namespace mcw;

namespace {

constexpr double kPi = std::numbers::pi;
const std::string kScenarioDir = MASLOVCW_SCENARIO_DIR;

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %-34s %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::shared_ptr<const RefSurface> disk(int level) {
  return std::make_shared<RefSurface>(build_surface(SurfaceKind::disk, level));
}

// 1. Disk normalization: mu = 2 on all three routes, residual < 1e-6 at
//    refinement 5 with 512 boundary samples.
void criterion_disk_normalization() {
  const Scenario sc = parse_scenario_file(kScenarioDir + "/disk_example.json");
  const RunResult result = run_scenario(sc);
  bool pass = result.rows.size() == 3;
  double worst = 0.0;
  for (const ReportRow& row : result.rows) {
    pass = pass && row.mu_rounded == 2 && row.refinement == 5 && row.residual < 1e-6;
    worst = std::max(worst, row.residual);
  }
  report(1, "disk normalization (mu = 2)", pass, "max residual " + fmt(worst));
}

// 2. Integrality + oracle agreement on 50 seeded random pairs at level 4.
void criterion_random_integrality() {
  const auto surface = disk(4);
  int agree = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int rank = 1 + static_cast<int>(seed % 3);
    const RandomPair random = make_random_pair(surface, rank, seed);
    const double cw = maslov_chern_weil(random.pair, QuadratureRule::standard(), 256).mu;
    const int top = maslov_topological(random.pair, 256);
    if (std::lround(cw) == top && top == random.exact_mu) ++agree;
    worst = std::max(worst, std::abs(cw - top));
  }
  report(2, "random pair integrality", agree == 50 && worst < 1e-3,
         std::to_string(agree) + "/50 agree, max residual " + fmt(worst));
}

// 3. Independence suite: connection, metric and frame-orientation changes move
//    mu by < 1e-3; orientation flip and conjugation negate it exactly.
void criterion_independence() {
  const RandomPair random = make_random_pair(disk(4), 2, 31);
  const QuadratureRule rule = QuadratureRule::standard();
  const double base = maslov_chern_weil(random.pair, rule, 256).mu;

  BundlePair shifted = random.pair;
  const ConnectionField extra = make_random_unitary_connection(2, 313, 0.3);
  auto a = random.pair.connection.coefficients;
  auto b = extra.coefficients;
  shifted.connection.coefficients = [a, b](const RefPoint& p) {
    auto [ax, ay] = a(p);
    auto [bx, by] = b(p);
    return std::make_pair((ax + bx).eval(), (ay + by).eval());
  };
  const double d_conn = std::abs(maslov_chern_weil(shifted, rule, 256).mu - base);

  BundlePair remetric = random.pair;
  remetric.metric = make_perturbed_metric(2, 99, 0.2);
  const double d_metric = std::abs(maslov_chern_weil(remetric, rule, 256).mu - base);

  BundlePair reframed = random.pair;
  auto frame_of = random.pair.boundary.loops[0].frame_of;
  reframed.boundary.loops[0].frame_of = [frame_of](double t) { return frame_of(t).flipped(); };
  const double d_frame = std::abs(maslov_chern_weil(reframed, rule, 256).mu - base);

  const long neg_orient =
      std::lround(maslov_chern_weil(reverse_orientation(random.pair), rule, 256).mu);
  const long neg_conj = std::lround(maslov_chern_weil(conjugate_pair(random.pair), rule, 256).mu);
  const bool negations = neg_orient == -random.exact_mu && neg_conj == -random.exact_mu;

  const bool pass = d_conn < 1e-3 && d_metric < 1e-3 && d_frame < 1e-3 && negations;
  report(3, "independence suite", pass,
         "dA " + fmt(d_conn) + ", dh " + fmt(d_metric) + ", dF " + fmt(d_frame) +
             (negations ? ", negations exact" : ", negations WRONG"));
}

// 4. Stokes/trace identities: tr(A^A) ~ 0 pointwise and the d(tr A) vs
//    boundary tr A residual converges at fitted order >= 1.9.
void criterion_stokes() {
  const ConnectionField conn = make_random_unitary_connection(2, 17, 0.4);
  double worst_comm = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = -0.9 + 1.8 * i / 19.0;
    auto [ax, ay] = conn.coefficients(RefPoint{x, 0.3 * x, 0});
    worst_comm = std::max(worst_comm, std::abs((ax * ay - ay * ax).trace()));
  }

  BundlePair pair;
  pair.k = 2;
  pair.connection = conn;
  pair.metric = MetricField::identity(2);
  const QuadratureRule rule = QuadratureRule::standard();
  std::vector<std::pair<double, double>> points;
  for (int level = 2; level <= 5; ++level) {
    pair.surface = disk(level);
    const TwoForm field = [&](const RefPoint& q, const Eigen::Vector2d& u,
                              const Eigen::Vector2d& v) {
      return curvature_trace(pair, q) * (u.x() * v.y() - u.y() * v.x());
    };
    const double interior = integrate_2form(*pair.surface, field, rule).imag();
    const double boundary =
        integrate_1form(pair.surface->boundary_loops[0],
                        [&](const RefPoint& p, const Eigen::Vector2d& v) {
                          auto [ax, ay] = conn.coefficients(p);
                          return ax.trace() * v.x() + ay.trace() * v.y();
                        },
                        rule, 256)
            .imag();
    points.push_back({-level * std::log(2.0), std::log(std::abs(interior - boundary))});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  report(4, "Stokes/trace identities", worst_comm < 1e-10 && order >= 1.9,
         "max |tr(A^A)| " + fmt(worst_comm) + ", fitted order " + fmt(order));
}

// 5. Gauss-Bonnet: caps at colatitudes pi/6, pi/3, pi/2 give mu = 2 = 2 chi
//    and the Gauss-Bonnet sum matches to 1e-3.
void criterion_gauss_bonnet() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : {"cap_pi6", "cap_pi3", "cap_pi2"}) {
    const Scenario sc = parse_scenario_file(kScenarioDir + "/" + name + ".json");
    const RunResult result = run_scenario(sc);
    bool cap_ok = result.routes_agree;
    double gb_residual = 1.0;
    for (const ReportRow& row : result.rows) {
      if (row.route == "check:gauss_bonnet") {
        gb_residual = row.residual;
        cap_ok = cap_ok && row.mu_rounded == 2 && row.residual < 1e-3;
      } else {
        cap_ok = cap_ok && row.mu_rounded == 2;
      }
    }
    pass = pass && cap_ok;
    detail += name + " " + fmt(gb_residual) + " ";
  }
  report(5, "Gauss-Bonnet caps", pass, detail);
}

// 6. Closed CP^1: mu = 4 with the Ricci integral residual < 1e-3.
void criterion_closed_cp1() {
  const Scenario sc = parse_scenario_file(kScenarioDir + "/cp1_closed.json");
  const RunResult result = run_scenario(sc);
  bool pass = !result.rows.empty() && result.routes_agree;
  double worst = 0.0;
  for (const ReportRow& row : result.rows) {
    pass = pass && row.mu_rounded == 4 && row.residual < 1e-3;
    worst = std::max(worst, row.residual);
  }
  report(6, "closed CP^1 Chern number", pass, "max residual " + fmt(worst));
}

// 7. Ricci-flat quantization: (1/pi) oint xi_J integral, invariant under
//    rescaling t in {0.5, 1, 2}.
void criterion_quantization() {
  const KahlerModel flat2 = KahlerModel::flat_cn(2);
  const KahlerModel flat1 = KahlerModel::flat_cn(1);
  bool pass = true;
  std::vector<double> torus_values;
  for (double t : {0.5, 1.0, 2.0}) {
    const TotallyRealConstraint torus = TotallyRealConstraint::torus({t, 0.7 * t});
    ChartLoop loop;
    loop.position = [t](double s) {
      Eigen::VectorXcd z(2);
      z << t * std::exp(Complex(0, 2 * kPi * s)), 0.7 * t;
      return z;
    };
    loop.velocity = [t](double s) {
      Eigen::VectorXcd v(2);
      v << Complex(0, 2 * kPi) * t * std::exp(Complex(0, 2 * kPi * s)), 0.0;
      return v;
    };
    const double value = integrate_samples(xi_J(flat2, torus, loop, 256)) / kPi;
    torus_values.push_back(value);
    pass = pass && std::abs(value - std::round(value)) < 1e-3;
  }
  pass = pass && std::abs(torus_values[0] - torus_values[1]) < 1e-3 &&
         std::abs(torus_values[2] - torus_values[1]) < 1e-3;

  ChartLoop circle;
  circle.position = [](double s) {
    Eigen::VectorXcd z(1);
    z[0] = std::exp(Complex(0, 2 * kPi * s));
    return z;
  };
  circle.velocity = [](double s) {
    Eigen::VectorXcd v(1);
    v[0] = Complex(0, 2 * kPi) * std::exp(Complex(0, 2 * kPi * s));
    return v;
  };
  const double circle_value =
      integrate_samples(xi_J(flat1, TotallyRealConstraint::circle(1.0), circle, 256)) / kPi;
  pass = pass && std::abs(circle_value - std::round(circle_value)) < 1e-3;

  report(7, "Ricci-flat quantization", pass,
         "torus " + fmt(torus_values[1]) + ", circle " + fmt(circle_value));
}

// 8. Kahler-Einstein monotonicity on the hemisphere.
void criterion_hemisphere_monotonicity() {
  const Scenario sc = parse_scenario_file(kScenarioDir + "/hemisphere.json");
  const RunResult result = run_scenario(sc);
  bool pass = result.routes_agree;
  double line = 1.0, alpha = 0.0;
  for (const ReportRow& row : result.rows) {
    if (row.route == "check:einstein_monotone") {
      line = row.mu_raw;
      alpha = row.alpha_L.value_or(0.0);
    } else if (!row.is_check) {
      pass = pass && row.mu_rounded == 2;
    }
  }
  pass = pass && std::abs(line) < 1e-3 && std::abs(alpha - 2 * kPi) < 1e-3;
  report(8, "hemisphere monotonicity", pass,
         "pi mu - c alpha + H term = " + fmt(line) + ", alpha " + fmt(alpha));
}

// 9. Soliton monotonicity for circle self-shrinkers, r in {0.5, 1, 2}.
void criterion_soliton_monotonicity() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : {"soliton_r05", "soliton_r10", "soliton_r20"}) {
    const Scenario sc = parse_scenario_file(kScenarioDir + "/" + name + ".json");
    const RunResult result = run_scenario(sc);
    double line = 1.0;
    bool ok = result.routes_agree;
    for (const ReportRow& row : result.rows) {
      if (row.route == "check:soliton_monotone") {
        line = row.mu_raw;
      } else if (!row.is_check) {
        ok = ok && row.mu_rounded == 2;
      }
    }
    ok = ok && std::abs(line) < 1e-3;
    pass = pass && ok;
    detail += fmt(line) + " ";
  }
  report(9, "soliton monotonicity", pass, detail);
}

// 10. Lagrangian cross-check: |oint omega(H,.) - oint xi_J| < 1e-4 at 256
//     samples on torus scenarios.
void criterion_lagrangian_crosscheck() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : {"torus_disk", "clifford_torus_disk"}) {
    const Scenario sc = parse_scenario_file(kScenarioDir + "/" + name + ".json");
    RunOverrides samples;
    samples.boundary_samples = 256;
    const RunResult result = run_scenario(sc, samples);
    double diff = 1.0;
    for (const ReportRow& row : result.rows) {
      if (row.route == "check:xi_vs_H") diff = std::abs(row.mu_raw);
    }
    pass = pass && diff < 1e-4;
    detail += name + " " + fmt(diff) + " ";
  }
  report(10, "Lagrangian H cross-check", pass, detail);
}

// 11. Deformation invariance: 10 seeded interior perturbations keep mu = 2.
void criterion_deformation() {
  ModelSpec flat2_spec;
  flat2_spec.n = 2;
  const KahlerModel flat2 = make_builtin_model(flat2_spec);
  const TotallyRealConstraint torus = TotallyRealConstraint::torus({1.0, 0.7});
  const auto surface = disk(4);
  int fixed = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ImmersionSpec spec;
    spec.name = "torus_slice";
    spec.radii = {1.0, 0.7};
    spec.bump_amplitude = 0.1;
    spec.seed = seed;
    const ImmersedSurface immersed = make_builtin_immersion(spec, flat2_spec, surface);
    const GeometricMaslovReport geo =
        maslov_geometric(flat2, immersed, torus, QuadratureRule::standard(), 256, 1e-3);
    if (geo.mu_rounded == 2 && geo.residual < 1e-3) ++fixed;
  }
  report(11, "deformation invariance", fixed == 10, std::to_string(fixed) + "/10 fixed at 2");
}

// 12. Determinism: identical runs produce identical CSV (wall time excluded).
void criterion_determinism() {
  auto strip_wall = [](const std::string& csv) {
    std::string out;
    size_t start = 0;
    while (start < csv.size()) {
      size_t end = csv.find('\n', start);
      if (end == std::string::npos) end = csv.size();
      const std::string line = csv.substr(start, end - start);
      out += line.substr(0, line.rfind(',')) + "\n";
      start = end + 1;
    }
    return out;
  };
  bool pass = true;
  for (const std::string& name : {"random_pair", "disk_example_abstract", "torus_disk"}) {
    const Scenario sc = parse_scenario_file(kScenarioDir + "/" + name + ".json");
    const std::string a = strip_wall(csv_string(run_scenario(sc).rows));
    const std::string b = strip_wall(csv_string(run_scenario(sc).rows));
    pass = pass && a == b;
  }
  report(12, "determinism", pass, pass ? "byte-identical" : "diverged");
}

}  // namespace

int main() {
  std::printf("maslovcw acceptance suite\n");
  criterion_disk_normalization();
  criterion_random_integrality();
  criterion_independence();
  criterion_stokes();
  criterion_gauss_bonnet();
  criterion_closed_cp1();
  criterion_quantization();
  criterion_hemisphere_monotonicity();
  criterion_soliton_monotonicity();
  criterion_lagrangian_crosscheck();
  criterion_deformation();
  criterion_determinism();
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
