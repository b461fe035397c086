#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blochgen/analysis.hpp"
#include "blochgen/codegen.hpp"
#include "blochgen/config.hpp"
#include "blochgen/errors.hpp"
#include "blochgen/liouvillian.hpp"
#include "blochgen/service.hpp"
#include "blochgen/units.hpp"

namespace py = pybind11;
using namespace blochgen;

namespace {

ConfigDocument document(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(doc);
}

py::array_t<double> state_matrix(const std::vector<StateVector>& states, std::size_t dim) {
  py::array_t<double> out({states.size(), dim});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < states.size(); ++r)
    for (std::size_t c = 0; c < dim; ++c) view(r, c) = states[r][c];
  return out;
}

py::array_t<double> vector_array(const std::vector<double>& v) {
  py::array_t<double> out({static_cast<py::ssize_t>(v.size())}, {static_cast<py::ssize_t>(sizeof(double))});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::tuple run_evolve(const std::string& config) {
  const auto cfg = document(config);
  const auto sys = generate(cfg.diagram);
  const auto gen = compile(sys, cfg.params);
  const auto init = initial_state(cfg);
  Trajectory traj;
  {
    py::gil_scoped_release release;
    traj = evolve(gen, init, cfg.solver);
  }
  return py::make_tuple(vector_array(traj.times),
                        state_matrix(traj.states, sys.layout().dimension()));
}

py::tuple run_sweep(const std::string& config, unsigned workers) {
  const auto cfg = document(config);
  if (!cfg.sweep) throw ConfigError("config has no 'sweep' block");
  const auto sys = generate(cfg.diagram);
  SweepOptions opts;
  opts.workers = workers;
  opts.initial = initial_state(cfg);
  Spectrum spec;
  {
    py::gil_scoped_release release;
    spec = sweep(sys, cfg.params, cfg.diagram, *cfg.sweep, opts);
  }
  return py::make_tuple(vector_array(spec.detunings_mhz),
                        state_matrix(spec.final_states, sys.layout().dimension()));
}

std::string run_codegen(const std::string& config, const std::string& mode) {
  if (mode != "temporal" && mode != "detuning") throw py::value_error("mode must be 'temporal' or 'detuning'");
  const auto cfg = document(config);
  const auto sys = generate(cfg.diagram);
  CodegenRequest req;
  req.system = &sys;
  req.diagram = &cfg.diagram;
  req.params = &cfg.params;
  req.mode = mode == "temporal" ? CodegenMode::Temporal : CodegenMode::Detuning;
  req.solver = cfg.solver;
  if (req.mode == CodegenMode::Detuning) req.sweep = cfg.sweep;
  req.initial = initial_state(cfg);
  req.observables = observables(cfg);
  return emit(req).text;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optical Bloch equation generator: native bindings";

  auto base = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<UnboundHandleError>(m, "UnboundHandleError", PyExc_KeyError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_ArithmeticError);
  py::register_exception<CodegenError>(m, "CodegenError", PyExc_ValueError);
  (void)base;

  m.def("equation_count", &equation_count, py::arg("n_levels"));
  m.def("mhz_to_rad", &mhz_to_rad, py::arg("mhz"));
  m.def("rad_to_mhz", &rad_to_mhz, py::arg("rad"));
  m.def("two_level_steady_state", &two_level_steady_state, py::arg("omega"), py::arg("gamma_pop"),
        py::arg("gamma_coh"), py::arg("delta"));

  m.def("preset_config", [](const std::string& name) { return to_json(preset_document(parse_preset_name(name))).dump(); },
        py::arg("name"), "Preset config document as JSON text.");
  m.def("validate", [](const std::string& config) { return validate(document(config).diagram).messages(); },
        py::arg("config"), "Violation messages; empty when the diagram is valid.");
  m.def("equations",
        [](const std::string& config, const std::string& format) {
          if (format != "plain" && format != "latex") throw py::value_error("format must be 'plain' or 'latex'");
          return render(generate(document(config).diagram), format == "plain" ? RenderFormat::Plain : RenderFormat::Latex);
        },
        py::arg("config"), py::arg("format") = "plain");
  m.def("evolve", &run_evolve, py::arg("config"), "(times, states) with one row per recorded step.");
  m.def("sweep", &run_sweep, py::arg("config"), py::arg("workers") = 0, "(detunings_mhz, final_states).");
  m.def("codegen", &run_codegen, py::arg("config"), py::arg("mode") = "temporal");
  m.def("handle_request", [](const std::string& request) {
          nlohmann::json req;
          try {
            req = nlohmann::json::parse(request);
          } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(e.what());
          }
          return handle_request(req).dump();
        },
        py::arg("request"), "JSON request/response boundary used by the companion UI.");
}
