#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maslovcw/builtins.hpp"

namespace mcw {

enum class ScenarioKind { abstract_pair, immersed, gauss_bonnet, monotonicity, closed };

ScenarioKind scenario_kind_from_string(const std::string& name);
std::string to_string(ScenarioKind kind);

// Scenario description, parsed from a versioned JSON file.
struct Scenario {
  int schema_version = 1;
  std::string id;
  ScenarioKind kind = ScenarioKind::abstract_pair;
  SurfaceKind surface_kind = SurfaceKind::disk;
  int level = 4;
  std::optional<std::pair<int, int>> level_range;
  std::vector<std::string> routes;  // subset of {cw, top, geom}
  double tolerance = 1e-3;
  std::optional<int> boundary_samples;

  PairSpec pair;              // abstract / closed(abstract)
  ModelSpec model;            // ambient kinds
  ImmersionSpec immersion;
  ConstraintSpec constraint;
  bool has_model = false;

  void validate() const;  // parameter ranges; throws ValidationError
};

Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_json(const std::string& text, const std::string& origin = "<string>");

// One output row per (route x refinement). Check rows (route "check:...")
// carry an expected-zero or expected-mu diagnostic and are excluded from the
// shared-rounded-value consistency requirement.
struct ReportRow {
  std::string scenario;
  std::string route;
  int refinement = 0;
  double mu_raw = 0.0;
  long mu_rounded = 0;
  double residual = 0.0;
  std::optional<double> int_curvature;
  std::optional<double> int_boundary;
  std::optional<double> alpha_L;
  double wall_ms = 0.0;
  bool is_check = false;
};

struct RunOverrides {
  std::optional<std::vector<std::string>> routes;
  std::optional<int> level;
  std::optional<std::pair<int, int>> level_range;
  std::optional<double> tolerance;
  std::optional<int> boundary_samples;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  std::vector<ReportRow> rows;
  bool within_tolerance = true;  // all residuals < tolerance
  bool routes_agree = true;      // non-check rows share the rounded value
};

RunResult run_scenario(const Scenario& scenario, const RunOverrides& overrides = {});

// CSV with the fixed header
// scenario,route,refinement,mu_raw,mu_rounded,residual,int_curvature,int_boundary,alpha_L,wall_ms
// Deterministic apart from the wall_ms column. Absent components are empty.
void emit_csv(const std::vector<ReportRow>& rows, std::ostream& out);
void emit_csv(const std::vector<ReportRow>& rows, const std::string& path);
std::string csv_string(const std::vector<ReportRow>& rows);

// Least-squares order fit of log(residual) against log(h), h = 2^-level.
// Routes whose residuals sit at the noise floor (< 1e-13) report no order.
struct ConvergenceStudy {
  std::vector<ReportRow> rows;
  std::map<std::string, std::optional<double>> fitted_order;
};

ConvergenceStudy convergence_study(const Scenario& scenario, int level_lo, int level_hi,
                                   const RunOverrides& overrides = {});

}  // namespace mcw
