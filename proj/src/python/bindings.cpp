#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maslovcw/scenario.hpp"

namespace py = pybind11;

namespace {

py::dict row_to_dict(const mcw::ReportRow& row) {
  py::dict d;
  d["scenario"] = row.scenario;
  d["route"] = row.route;
  d["refinement"] = row.refinement;
  d["mu_raw"] = row.mu_raw;
  d["mu_rounded"] = row.mu_rounded;
  d["residual"] = row.residual;
  if (row.int_curvature) d["int_curvature"] = *row.int_curvature;
  if (row.int_boundary) d["int_boundary"] = *row.int_boundary;
  if (row.alpha_L) d["alpha_L"] = *row.alpha_L;
  d["wall_ms"] = row.wall_ms;
  d["is_check"] = row.is_check;
  return d;
}

py::list rows_to_list(const std::vector<mcw::ReportRow>& rows) {
  py::list out;
  for (const auto& row : rows) out.append(row_to_dict(row));
  return out;
}

mcw::BundlePair pair_from_frames(const std::function<Eigen::MatrixXcd(double)>& frame_of, int rank,
                                 int level) {
  mcw::BundlePair pair;
  pair.surface =
      std::make_shared<mcw::RefSurface>(mcw::build_surface(mcw::SurfaceKind::disk, level));
  pair.k = rank;
  pair.connection = mcw::ConnectionField::flat(rank);
  pair.metric = mcw::MetricField::identity(rank);
  mcw::BoundaryFrameLoop loop;
  loop.frame_of = [frame_of](double t) { return mcw::Frame(frame_of(t)); };
  pair.boundary.loops.push_back(std::move(loop));
  return pair;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Maslov index of bundle pairs over surfaces with boundary: curvature integrals, "
            "boundary connection forms and winding numbers";

  py::register_exception<mcw::Error>(m, "MaslovError");

  m.def(
      "winding_number",
      [](const Eigen::VectorXcd& samples) {
        return mcw::winding_number(mcw::PhaseTrack::from_samples(samples));
      },
      py::arg("samples"),
      "Winding number of a closed loop of nonzero complex samples");

  m.def(
      "unwrap_phases",
      [](const Eigen::VectorXcd& samples) {
        return mcw::PhaseTrack::from_samples(samples).unwrapped_angles;
      },
      py::arg("samples"), "Cumulative unwrapped arguments of the samples");

  py::class_<mcw::RefSurface>(m, "Surface")
      .def_property_readonly("kind",
                             [](const mcw::RefSurface& s) { return mcw::to_string(s.kind); })
      .def_property_readonly("refinement_level",
                             [](const mcw::RefSurface& s) { return s.refinement_level; })
      .def_property_readonly("num_vertices",
                             [](const mcw::RefSurface& s) { return s.vertices.rows(); })
      .def_property_readonly("num_triangles",
                             [](const mcw::RefSurface& s) { return s.triangles.size(); })
      .def_property_readonly("num_boundary_loops",
                             [](const mcw::RefSurface& s) { return s.boundary_loops.size(); })
      .def("euler_characteristic",
           [](const mcw::RefSurface& s) { return mcw::euler_characteristic(s); })
      .def("dump", [](const mcw::RefSurface& s) { return mcw::dump_mesh(s); });

  m.def(
      "build_surface",
      [](const std::string& kind, int level) {
        return mcw::build_surface(mcw::surface_kind_from_string(kind), level);
      },
      py::arg("kind"), py::arg("level"),
      "Reference surface: disk, annulus, closed_sphere or spherical_cap_domain");

  m.def(
      "maslov_topological",
      [](const std::function<Eigen::MatrixXcd(double)>& frame_of, int rank, int level,
         int samples) {
        const mcw::BundlePair pair = pair_from_frames(frame_of, rank, level);
        return mcw::maslov_topological(pair, samples);
      },
      py::arg("frame_of"), py::arg("rank"), py::arg("level") = 2, py::arg("samples") = 256,
      "Winding route for a disk pair whose boundary frames come from a callable t -> (n x k) "
      "complex matrix");

  m.def(
      "maslov_chern_weil_flat",
      [](const std::function<Eigen::MatrixXcd(double)>& frame_of, int rank, int level,
         int samples) {
        const mcw::BundlePair pair = pair_from_frames(frame_of, rank, level);
        return mcw::maslov_chern_weil(pair, mcw::QuadratureRule::standard(), samples).mu;
      },
      py::arg("frame_of"), py::arg("rank"), py::arg("level") = 2, py::arg("samples") = 256,
      "Curvature + boundary route for a flat disk pair with the given boundary frames");

  m.def(
      "run_scenario_file",
      [](const std::string& path) {
        const mcw::RunResult result = mcw::run_scenario(mcw::parse_scenario_file(path));
        py::dict out;
        out["rows"] = rows_to_list(result.rows);
        out["within_tolerance"] = result.within_tolerance;
        out["routes_agree"] = result.routes_agree;
        return out;
      },
      py::arg("path"), "Run a scenario JSON file and return its report rows");

  m.def(
      "run_scenario_json",
      [](const std::string& text) {
        const mcw::RunResult result = mcw::run_scenario(mcw::parse_scenario_json(text));
        py::dict out;
        out["rows"] = rows_to_list(result.rows);
        out["within_tolerance"] = result.within_tolerance;
        out["routes_agree"] = result.routes_agree;
        return out;
      },
      py::arg("text"), "Run a scenario given as a JSON string");

  m.def(
      "scenario_csv",
      [](const std::string& path) {
        return mcw::csv_string(mcw::run_scenario(mcw::parse_scenario_file(path)).rows);
      },
      py::arg("path"), "Run a scenario file and return the CSV report");

  m.def("list_builtins", &mcw::builtin_summaries, "Builtin pairs, models and constraints");

  m.attr("__version__") = "0.1.0";
}
