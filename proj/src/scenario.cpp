#include "maslovcw/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace mcw {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(errc::parse_error, "field '" + key + "': " + e.what());
  }
}

void require_range(double value, double lo, double hi, const std::string& what) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream msg;
    msg << what << " = " << value << " outside [" << lo << ", " << hi << "]";
    throw Error(errc::validation_error, msg.str());
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ReportRow make_row(const std::string& scenario, const std::string& route, int level, double raw,
                   long rounded, double residual, double wall_ms) {
  ReportRow row;
  row.scenario = scenario;
  row.route = route;
  row.refinement = level;
  row.mu_raw = raw;
  row.mu_rounded = rounded;
  row.residual = residual;
  row.wall_ms = wall_ms;
  row.is_check = route.rfind("check:", 0) == 0;
  return row;
}

}  // namespace

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "abstract") return ScenarioKind::abstract_pair;
  if (name == "immersed") return ScenarioKind::immersed;
  if (name == "gauss_bonnet") return ScenarioKind::gauss_bonnet;
  if (name == "monotonicity") return ScenarioKind::monotonicity;
  if (name == "closed") return ScenarioKind::closed;
  throw Error(errc::parse_error, "unknown scenario kind '" + name + "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::abstract_pair: return "abstract";
    case ScenarioKind::immersed: return "immersed";
    case ScenarioKind::gauss_bonnet: return "gauss_bonnet";
    case ScenarioKind::monotonicity: return "monotonicity";
    case ScenarioKind::closed: return "closed";
  }
  return "abstract";
}

Scenario parse_scenario_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(errc::parse_error, origin + ": " + e.what());
  }
  Scenario sc;
  try {
    sc.schema_version = get_or<int>(j, "schema_version", 1);
    if (sc.schema_version != 1) {
      throw Error(errc::parse_error, origin + ": unsupported schema_version");
    }
    if (!j.contains("id")) throw Error(errc::parse_error, origin + ": missing 'id'");
    sc.id = j.at("id").get<std::string>();
    sc.kind = scenario_kind_from_string(get_or<std::string>(j, "kind", "abstract"));

    const json surface = get_or<json>(j, "surface", json::object());
    sc.surface_kind = surface_kind_from_string(get_or<std::string>(surface, "kind", "disk"));
    sc.level = get_or<int>(surface, "level", 4);
    if (surface.contains("levels")) {
      const auto levels = surface.at("levels").get<std::vector<int>>();
      if (levels.size() != 2) {
        throw Error(errc::parse_error, origin + ": surface.levels must be [lo, hi]");
      }
      sc.level_range = std::make_pair(levels[0], levels[1]);
      sc.level = levels[1];
    }
    sc.routes = get_or<std::vector<std::string>>(j, "routes", {});
    sc.tolerance = get_or<double>(j, "tolerance", 1e-3);
    if (j.contains("boundary_samples")) {
      sc.boundary_samples = j.at("boundary_samples").get<int>();
    }

    if (j.contains("pair")) {
      const json& p = j.at("pair");
      sc.pair.name = get_or<std::string>(p, "name", "disk_example");
      sc.pair.rank = get_or<int>(p, "rank", 1);
      sc.pair.m = get_or<long>(p, "m", 1);
      sc.pair.m_outer = get_or<long>(p, "m_outer", 1);
      sc.pair.m_inner = get_or<long>(p, "m_inner", 0);
      sc.pair.degree = get_or<long>(p, "degree", 1);
      sc.pair.seed = get_or<std::uint64_t>(p, "seed", 1);
    }
    if (j.contains("model")) {
      sc.has_model = true;
      const json& m = j.at("model");
      sc.model.name = get_or<std::string>(m, "name", "flat_Cn");
      sc.model.n = get_or<int>(m, "n", 1);
      sc.model.radius = get_or<double>(m, "radius", 1.0);
      const json im = get_or<json>(j, "immersion", json::object());
      sc.immersion.name = get_or<std::string>(im, "name", "scaled_identity");
      sc.immersion.scale = get_or<double>(im, "scale", 1.0);
      sc.immersion.radii = get_or<std::vector<double>>(im, "radii", {});
      sc.immersion.bump_amplitude = get_or<double>(im, "bump_amplitude", 0.0);
      sc.immersion.seed = get_or<std::uint64_t>(im, "seed", 1);
      const json cn = get_or<json>(j, "constraint", json::object());
      sc.constraint.name = get_or<std::string>(
          cn, "name", sc.kind == ScenarioKind::closed ? "none" : "circle");
      sc.constraint.radius = get_or<double>(cn, "radius", 0.0);
      sc.constraint.radii = get_or<std::vector<double>>(cn, "radii", {});
      sc.constraint.mean_curvature_zero = get_or<bool>(cn, "mean_curvature_zero", false);
      sc.constraint.soliton = get_or<bool>(cn, "soliton", false);
      // The builtin circle/torus mean curvature formulas are flat-chart ones;
      // drop them in curved models unless the loop is an explicit geodesic.
      sc.constraint.drop_mean_curvature = get_or<bool>(
          cn, "drop_mean_curvature",
          sc.model.name != "flat_Cn" && !sc.constraint.mean_curvature_zero);
      // Derive constraint geometry from the immersion when omitted.
      if (sc.constraint.name == "circle" && sc.constraint.radius == 0.0) {
        sc.constraint.radius =
            sc.immersion.scale * (sc.immersion.radii.empty() ? 1.0 : sc.immersion.radii[0]);
      }
      if (sc.constraint.name == "torus" && sc.constraint.radii.empty()) {
        for (double r : sc.immersion.radii) {
          sc.constraint.radii.push_back(r * sc.immersion.scale);
        }
      }
      sc.model.n = (sc.immersion.name == "torus_slice")
                       ? static_cast<int>(sc.immersion.radii.size())
                       : sc.model.n;
    }
  } catch (const json::exception& e) {
    throw Error(errc::parse_error, origin + ": " + e.what());
  }

  // Default routes by applicability.
  if (sc.routes.empty()) {
    if (sc.kind == ScenarioKind::abstract_pair) {
      sc.routes = {"cw", "top"};
    } else if (sc.kind == ScenarioKind::closed) {
      sc.routes = sc.has_model ? std::vector<std::string>{"cw", "geom"}
                               : std::vector<std::string>{"cw"};
    } else {
      sc.routes = {"cw", "top", "geom"};
    }
  }
  sc.validate();
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_error, "cannot open scenario file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str(), path);
}

void Scenario::validate() const {
  if (id.empty()) throw Error(errc::validation_error, "scenario id is empty");
  require_range(level, 0, 6, "surface.level");
  if (level_range) {
    require_range(level_range->first, 0, 6, "surface.levels[0]");
    require_range(level_range->second, 0, 6, "surface.levels[1]");
    if (level_range->first > level_range->second) {
      throw Error(errc::validation_error, "surface.levels must be ascending");
    }
  }
  require_range(tolerance, 1e-12, 1.0, "tolerance");
  if (boundary_samples) require_range(*boundary_samples, 16, 65536, "boundary_samples");

  const bool closed_surface = surface_kind == SurfaceKind::closed_sphere;
  if ((kind == ScenarioKind::closed) != closed_surface) {
    throw Error(errc::validation_error, "closed scenarios require the closed_sphere surface");
  }
  for (const std::string& route : routes) {
    if (route != "cw" && route != "top" && route != "geom") {
      throw Error(errc::validation_error, "unknown route '" + route + "'");
    }
    if (route == "top" && closed_surface) {
      throw Error(errc::validation_error, "topological route needs a surface with boundary");
    }
    if (route == "geom" && !has_model) {
      throw Error(errc::validation_error, "geometric route needs an ambient model");
    }
  }

  if (kind == ScenarioKind::abstract_pair || (kind == ScenarioKind::closed && !has_model)) {
    require_range(static_cast<double>(pair.rank), 1, 3, "pair.rank");
    require_range(static_cast<double>(std::abs(pair.m)), 0, 5, "|pair.m|");
    require_range(static_cast<double>(std::abs(pair.m_outer)), 0, 5, "|pair.m_outer|");
    require_range(static_cast<double>(std::abs(pair.m_inner)), 0, 5, "|pair.m_inner|");
    require_range(static_cast<double>(std::abs(pair.degree)), 0, 5, "|pair.degree|");
  } else {
    require_range(model.n, 1, 4, "model.n");
    require_range(model.radius, 0.1, 10.0, "model.radius");
    require_range(immersion.scale, 0.1, 10.0, "immersion.scale");
    for (double r : immersion.radii) require_range(r, 0.1, 10.0, "immersion.radii[]");
    require_range(immersion.bump_amplitude, 0.0, 0.5, "immersion.bump_amplitude");
    if (constraint.name == "circle") {
      require_range(constraint.radius, 0.1, 10.0, "constraint.radius");
    }
    if (constraint.name == "none" && kind != ScenarioKind::closed) {
      throw Error(errc::validation_error, "only closed scenarios may omit the constraint");
    }
    for (double r : constraint.radii) require_range(r, 0.1, 10.0, "constraint.radii[]");
    if (kind == ScenarioKind::gauss_bonnet && model.n != 1) {
      throw Error(errc::validation_error, "gauss_bonnet scenarios need an n = 1 model");
    }
  }
}

namespace {

struct LevelContext {
  int level = 4;
  int samples = 256;
  std::shared_ptr<const RefSurface> surface;
  QuadratureRule rule = QuadratureRule::standard();
};

void run_abstract(const Scenario& sc, const LevelContext& ctx, std::vector<ReportRow>& rows) {
  const BundlePair pair = make_builtin_pair(sc.pair, ctx.surface);
  for (const std::string& route : sc.routes) {
    const double t0 = now_ms();
    double raw = 0.0;
    std::optional<double> curv, bdry;
    if (route == "cw") {
      const ChernWeilResult cw = maslov_chern_weil(pair, ctx.rule, ctx.samples);
      raw = cw.mu;
      curv = cw.curvature_part;
      bdry = cw.boundary_part;
    } else if (route == "top") {
      raw = static_cast<double>(maslov_topological(pair, ctx.samples));
      bdry = raw;
    } else {
      throw Error(errc::validation_error, "abstract scenarios support routes cw and top");
    }
    const long rounded = std::lround(raw);
    ReportRow row = make_row(sc.id, route, ctx.level, raw, rounded, std::abs(raw - rounded),
                             now_ms() - t0);
    row.int_curvature = curv;
    row.int_boundary = bdry;
    rows.push_back(std::move(row));
  }
}

void run_ambient(const Scenario& sc, const LevelContext& ctx, std::vector<ReportRow>& rows) {
  const KahlerModel model = make_builtin_model(sc.model);
  const ImmersedSurface immersed = make_builtin_immersion(sc.immersion, sc.model, ctx.surface);
  const TotallyRealConstraint constraint = make_builtin_constraint(sc.constraint, sc.model);

  for (const std::string& route : sc.routes) {
    const double t0 = now_ms();
    double raw = 0.0;
    std::optional<double> curv, bdry, alpha;
    if (route == "geom") {
      const GeometricMaslovReport geo =
          maslov_geometric(model, immersed, constraint, ctx.rule, ctx.samples, sc.tolerance);
      raw = geo.mu_geometric;
      curv = geo.ricci_integral / kPi;
      bdry = -geo.xi_integral / kPi;
      alpha = geo.alpha_L;
    } else if (route == "cw") {
      const BundlePair pair = pullback_pair(model, immersed, constraint);
      const ChernWeilResult cw = maslov_chern_weil(pair, ctx.rule, ctx.samples);
      raw = cw.mu;
      curv = cw.curvature_part;
      bdry = cw.boundary_part;
    } else {  // top
      const BundlePair pair = pullback_pair(model, immersed, constraint);
      raw = static_cast<double>(maslov_topological(pair, ctx.samples));
      bdry = raw;
    }
    const long rounded = std::lround(raw);
    ReportRow row = make_row(sc.id, route, ctx.level, raw, rounded, std::abs(raw - rounded),
                             now_ms() - t0);
    row.int_curvature = curv;
    row.int_boundary = bdry;
    row.alpha_L = alpha;
    rows.push_back(std::move(row));
  }

  if (sc.kind == ScenarioKind::gauss_bonnet) {
    // (1/pi)(int K vol + oint k ds) against 2 chi, computed off the mesh chi.
    const double t0 = now_ms();
    const TwoForm k_vol = [&](const RefPoint& q, const Eigen::Vector2d& u,
                              const Eigen::Vector2d& v) {
      const Eigen::VectorXcd z = immersed.map(q);
      auto [du, dv] = immersed.differential(q);
      return Complex(ricci_form(model, z, du * u.x() + dv * u.y(), du * v.x() + dv * v.y()), 0.0);
    };
    const double gauss_integral = integrate_2form(*ctx.surface, k_vol, ctx.rule).real();
    double geodesic_total = 0.0;
    for (size_t li = 0; li < ctx.surface->boundary_loops.size(); ++li) {
      geodesic_total += geodesic_curvature_term(
          model, immersed_boundary_loop(immersed, static_cast<int>(li)), ctx.samples);
    }
    const double value = (gauss_integral + geodesic_total) / kPi;
    const long expected = 2L * euler_characteristic(*ctx.surface);
    ReportRow row = make_row(sc.id, "check:gauss_bonnet", ctx.level, value, expected,
                             std::abs(value - expected), now_ms() - t0);
    row.int_curvature = gauss_integral / kPi;
    row.int_boundary = geodesic_total / kPi;
    rows.push_back(std::move(row));
  }

  if (sc.kind == ScenarioKind::monotonicity) {
    const double t0 = now_ms();
    const MonotonicityReport mono =
        monotonicity_report(model, immersed, constraint, ctx.rule, ctx.samples, sc.tolerance);
    if (mono.einstein_residual) {
      ReportRow row = make_row(sc.id, "check:einstein_monotone", ctx.level,
                               *mono.einstein_residual, 0, std::abs(*mono.einstein_residual),
                               now_ms() - t0);
      row.alpha_L = mono.alpha_L;
      rows.push_back(std::move(row));
    }
    if (mono.soliton_residual) {
      ReportRow row = make_row(sc.id, "check:soliton_monotone", ctx.level, *mono.soliton_residual,
                               0, std::abs(*mono.soliton_residual), now_ms() - t0);
      row.alpha_L = mono.alpha_L;
      rows.push_back(std::move(row));
    }
    if (mono.boundary_H_term && constraint.is_lagrangian) {
      // Cross-check of the two boundary routes: oint omega(H, .) vs oint xi_J.
      double xi_total = 0.0;
      for (size_t li = 0; li < ctx.surface->boundary_loops.size(); ++li) {
        xi_total += integrate_samples(xi_J(
            model, constraint, immersed_boundary_loop(immersed, static_cast<int>(li)),
            ctx.samples));
      }
      const double diff = *mono.boundary_H_term - xi_total;
      ReportRow row =
          make_row(sc.id, "check:xi_vs_H", ctx.level, diff, 0, std::abs(diff), now_ms() - t0);
      row.alpha_L = mono.alpha_L;
      rows.push_back(std::move(row));
    }
  }
}

}  // namespace

RunResult run_scenario(const Scenario& input, const RunOverrides& overrides) {
  Scenario sc = input;
  if (overrides.routes) sc.routes = *overrides.routes;
  if (overrides.level) {
    sc.level = *overrides.level;
    sc.level_range.reset();
  }
  if (overrides.level_range) sc.level_range = *overrides.level_range;
  if (overrides.tolerance) sc.tolerance = *overrides.tolerance;
  if (overrides.boundary_samples) sc.boundary_samples = *overrides.boundary_samples;
  if (overrides.seed) {
    sc.pair.seed = *overrides.seed;
    sc.immersion.seed = *overrides.seed;
  }
  sc.validate();

  std::vector<int> levels;
  if (sc.level_range) {
    for (int l = sc.level_range->first; l <= sc.level_range->second; ++l) levels.push_back(l);
  } else {
    levels.push_back(sc.level);
  }

  RunResult result;
  for (int level : levels) {
    LevelContext ctx;
    ctx.level = level;
    ctx.samples = sc.boundary_samples ? *sc.boundary_samples : default_boundary_samples(level);
    ctx.surface = std::make_shared<RefSurface>(build_surface(sc.surface_kind, level));
    if (sc.has_model) {
      run_ambient(sc, ctx, result.rows);
    } else {
      run_abstract(sc, ctx, result.rows);
    }
  }

  for (const ReportRow& row : result.rows) {
    if (row.residual >= sc.tolerance) result.within_tolerance = false;
  }
  // Non-check rows of the same refinement must agree after rounding.
  for (int level : levels) {
    std::optional<long> rounded;
    for (const ReportRow& row : result.rows) {
      if (row.is_check || row.refinement != level) continue;
      if (!rounded) {
        rounded = row.mu_rounded;
      } else if (*rounded != row.mu_rounded) {
        result.routes_agree = false;
      }
    }
  }
  return result;
}

void emit_csv(const std::vector<ReportRow>& rows, std::ostream& out) {
  if (rows.empty()) {
    throw Error(errc::validation_error, "no rows to emit");
  }
  out << "scenario,route,refinement,mu_raw,mu_rounded,residual,int_curvature,int_boundary,"
         "alpha_L,wall_ms\n";
  for (const ReportRow& row : rows) {
    out << row.scenario << ',' << row.route << ',' << row.refinement << ','
        << format_double(row.mu_raw) << ',' << row.mu_rounded << ','
        << format_double(row.residual) << ',';
    if (row.int_curvature) out << format_double(*row.int_curvature);
    out << ',';
    if (row.int_boundary) out << format_double(*row.int_boundary);
    out << ',';
    if (row.alpha_L) out << format_double(*row.alpha_L);
    out << ',';
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", row.wall_ms);
    out << wall << '\n';
  }
  if (!out) {
    throw Error(errc::io_error, "failed while writing CSV");
  }
}

void emit_csv(const std::vector<ReportRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(errc::io_error, "cannot open '" + path + "' for writing");
  }
  emit_csv(rows, static_cast<std::ostream&>(out));
}

std::string csv_string(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  emit_csv(rows, out);
  return out.str();
}

ConvergenceStudy convergence_study(const Scenario& scenario, int level_lo, int level_hi,
                                   const RunOverrides& overrides) {
  if (level_hi - level_lo < 2) {
    throw Error(errc::validation_error, "convergence study needs at least three levels");
  }
  RunOverrides ov = overrides;
  ov.level_range = std::make_pair(level_lo, level_hi);
  ov.level.reset();
  ConvergenceStudy study;
  study.rows = run_scenario(scenario, ov).rows;

  std::map<std::string, std::vector<std::pair<double, double>>> points;  // route -> (log h, log r)
  for (const ReportRow& row : study.rows) {
    if (row.is_check) continue;
    if (row.residual < 1e-13) continue;  // noise floor; treated as exact
    const double log_h = -row.refinement * std::log(2.0);
    points[row.route].push_back({log_h, std::log(row.residual)});
  }
  for (const std::string& route : scenario.routes) {
    const auto it = points.find(route);
    if (it == points.end() || it->second.size() < 3) {
      study.fitted_order[route] = std::nullopt;
      continue;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(it->second.size());
    for (const auto& [x, y] : it->second) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    study.fitted_order[route] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return study;
}

}  // namespace mcw
