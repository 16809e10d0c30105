#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "maslov/commands.hpp"
#include "maslov/config.hpp"
#include "maslov/errors.hpp"
#include "maslov/expression.hpp"
#include "maslov/morse.hpp"
#include "maslov/oracle.hpp"
#include "maslov/spectral_flow.hpp"
#include "maslov/validation.hpp"

namespace py = pybind11;
using namespace maslov;

namespace {

Problem from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SyntaxError, e.what());
  }
  return build_problem(config_from_json(j));
}

std::string report(const Problem& p, bool oracle) {
  MorseReport r = morse_via_theorem(p);
  if (oracle) r.oracleCount = oracle::negative_count(oracle::assemble(p, 1.0, p.settings.oracleMesh));
  return report_to_json(r, p).dump();
}

py::tuple box(const Problem& p, double s0, double lambda_inf, int samples) {
  SpectralFlowOptions opts;
  opts.samples = samples;
  const BoxResult b = maslov_box(shooting_system(p), s0, lambda_inf, opts);
  return py::make_tuple(b.indices[0], b.indices[1], b.indices[2], b.indices[3]);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Morse indices of matrix Schrodinger operators on [0, 1] through the Maslov index";

  py::register_exception<Error>(m, "MaslovError", PyExc_RuntimeError);

  py::class_<Problem>(m, "Problem")
      .def_static("from_json", &from_json, py::arg("text"))
      .def_static("load", &load_config, py::arg("path_or_name"),
                  "A configuration file, or one of example1..example4.")
      .def_property_readonly("n", [](const Problem& p) { return p.n; })
      .def_property(
          "s0", [](const Problem& p) { return p.settings.s0; },
          [](Problem& p, double v) { p.settings.s0 = v; })
      .def_property(
          "steps", [](const Problem& p) { return p.settings.steps; },
          [](Problem& p, int v) { p.settings.steps = v; })
      .def_property(
          "oracle_mesh", [](const Problem& p) { return p.settings.oracleMesh; },
          [](Problem& p, int v) { p.settings.oracleMesh = v; })
      .def("__repr__", [](const Problem& p) { return "<Problem n=" + std::to_string(p.n) + ">"; });

  m.def("version", &version);
  m.def("report", &report, py::arg("problem"), py::arg("oracle") = true,
        "Theorem report as a JSON string.");
  m.def("morse_index", [](const Problem& p) { return morse_via_theorem(p).morH; }, py::arg("problem"));
  m.def("gamma3_count", &morse_via_gamma3, py::arg("problem"));
  m.def("count_below", &count_below, py::arg("problem"), py::arg("lambda0"));
  m.def("principal_maslov_index",
        [](const Problem& p, double s0) {
          return spectral_flow(PathSegment::gamma2(s0, p.settings.samples), shooting_system(p)).index;
        },
        py::arg("problem"), py::arg("s0") = 0.05);
  m.def("maslov_box", &box, py::arg("problem"), py::arg("s0"), py::arg("lambda_inf"),
        py::arg("samples") = 400, "Indices of the four sides; raises when they do not sum to zero.");
  m.def("lambda_infty", &verified_lambda_infty, py::arg("problem"), py::arg("s0"));
  m.def("negative_count",
        [](const Problem& p, int mesh, double s) { return oracle::mesh_stable_negative_count(p, mesh, s); },
        py::arg("problem"), py::arg("mesh") = 1000, py::arg("s") = 1.0);
  m.def("lowest_eigenvalues",
        [](const Problem& p, int k, double s, int mesh) {
          return oracle::lowest_eigenvalues(oracle::assemble(p, s, mesh), k);
        },
        py::arg("problem"), py::arg("k"), py::arg("s") = 1.0, py::arg("mesh") = 2000);
  m.def("check",
        [](const Problem& p) {
          std::vector<std::tuple<std::string, bool, std::string>> out;
          for (const auto& c : consistency_checks(p)) out.emplace_back(c.name, c.passed, c.detail);
          return out;
        },
        py::arg("problem"));
  m.def("evaluate", [](const std::string& expr, double x) { return parse_expression(expr)(x); },
        py::arg("expression"), py::arg("x"));
}
