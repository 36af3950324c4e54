#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maslovcw/scenario.hpp"

namespace {

std::vector<std::string> split_routes(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_rows(const std::vector<mcw::ReportRow>& rows) {
  for (const auto& row : rows) {
    std::printf("%-24s %-24s level %d  value % .9f  rounded % ld  residual %.3e\n",
                row.scenario.c_str(), row.route.c_str(), row.refinement, row.mu_raw,
                row.mu_rounded, row.residual);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maslovcw: Maslov index by curvature integrals, boundary connection forms and "
               "winding numbers"};

  std::string scenario_path;
  std::string routes_flag;
  std::string csv_path;
  std::string levels_flag;
  int refine = -1;
  double tol = -1.0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool list_builtins = false;

  app.add_option("--scenario", scenario_path, "Scenario JSON file");
  app.add_option("--routes", routes_flag, "Comma list of routes: cw,top,geom");
  app.add_option("--refine", refine, "Refinement level (0..6)");
  app.add_option("--levels", levels_flag, "Level range A..B (convergence study)");
  app.add_option("--csv", csv_path, "Write rows as CSV to this path");
  app.add_option("--tol", tol, "Tolerance override");
  app.add_option("--seed", seed, "Seed override for randomized scenarios")
      ->each([&](const std::string&) { has_seed = true; });
  app.add_flag("--list-builtins", list_builtins, "List builtin pairs, models and constraints");

  CLI11_PARSE(app, argc, argv);

  if (list_builtins) {
    for (const std::string& line : mcw::builtin_summaries()) {
      std::cout << line << "\n";
    }
    return 0;
  }
  if (scenario_path.empty()) {
    std::cerr << "error: --scenario FILE is required (or --list-builtins)\n";
    return 2;
  }

  try {
    const mcw::Scenario scenario = mcw::parse_scenario_file(scenario_path);
    mcw::RunOverrides overrides;
    if (!routes_flag.empty()) overrides.routes = split_routes(routes_flag);
    if (refine >= 0) overrides.level = refine;
    if (tol > 0) overrides.tolerance = tol;
    if (has_seed) overrides.seed = seed;

    std::optional<std::pair<int, int>> levels;
    if (!levels_flag.empty()) {
      const auto dots = levels_flag.find("..");
      if (dots == std::string::npos) {
        std::cerr << "error: --levels expects A..B\n";
        return 2;
      }
      levels = std::make_pair(std::stoi(levels_flag.substr(0, dots)),
                              std::stoi(levels_flag.substr(dots + 2)));
    }

    std::vector<mcw::ReportRow> rows;
    bool ok_tol = true, ok_agree = true;
    if (levels) {
      const mcw::ConvergenceStudy study =
          mcw::convergence_study(scenario, levels->first, levels->second, overrides);
      rows = study.rows;
      print_rows(rows);
      for (const auto& [route, order] : study.fitted_order) {
        if (order) {
          std::printf("%-24s %-24s fitted order %.2f\n", scenario.id.c_str(), route.c_str(),
                      *order);
        } else {
          std::printf("%-24s %-24s residuals at noise floor (exact)\n", scenario.id.c_str(),
                      route.c_str());
        }
      }
      double tolerance = overrides.tolerance.value_or(scenario.tolerance);
      for (const auto& row : rows) {
        if (row.refinement == levels->second && row.residual >= tolerance) ok_tol = false;
      }
    } else {
      const mcw::RunResult result = mcw::run_scenario(scenario, overrides);
      rows = result.rows;
      print_rows(rows);
      ok_tol = result.within_tolerance;
      ok_agree = result.routes_agree;
    }
    if (!csv_path.empty()) {
      mcw::emit_csv(rows, csv_path);
      std::cout << "csv written to " << csv_path << "\n";
    }
    if (!ok_agree) {
      std::cerr << "routes disagree after rounding\n";
      return 1;
    }
    if (!ok_tol) {
      std::cerr << "residuals exceed the tolerance\n";
      return 1;
    }
    return 0;
  } catch (const mcw::Error& e) {
    std::cerr << mcw::errc_name(e.code()) << ": " << e.what() << "\n";
    return e.is_input_error() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
