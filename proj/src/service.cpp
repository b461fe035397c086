#include "blochgen/service.hpp"

#include <sstream>

#include "blochgen/codegen.hpp"
#include "blochgen/config.hpp"
#include "blochgen/errors.hpp"
#include "blochgen/liouvillian.hpp"
#include "blochgen/report.hpp"

namespace blochgen {

using nlohmann::json;

namespace {

struct RequestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json failure(const std::string& kind, const std::vector<std::string>& messages) {
  return {{"ok", false}, {"error", {{"kind", kind}, {"messages", messages}}}};
}

std::string string_or(const json& req, const char* key, const std::string& fallback) {
  auto it = req.find(key);
  if (it == req.end()) return fallback;
  if (!it->is_string()) throw RequestError(std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

ConfigDocument request_config(const json& req) {
  auto it = req.find("config");
  if (it == req.end()) throw RequestError("request needs a 'config' document");
  return parse_config(*it);
}

json series(const std::vector<ElementId>& obs, const std::vector<StateVector>& states) {
  json out = json::object();
  if (states.empty()) return out;
  const auto cols = observable_columns(obs);
  const auto slots = observable_slots(states.front().layout(), obs);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<double> v;
    v.reserve(states.size());
    for (const auto& s : states) v.push_back(s[slots[c]]);
    out[cols[c]] = std::move(v);
  }
  return out;
}

json op_validate(const json& req) {
  const auto cfg = request_config(req);
  const auto report = validate(cfg.diagram);
  return {{"ok", true}, {"valid", report.ok()}, {"messages", report.messages()}};
}

json op_equations(const json& req) {
  const auto cfg = request_config(req);
  const std::string fmt = string_or(req, "format", "plain");
  if (fmt != "plain" && fmt != "latex") throw RequestError("format must be 'plain' or 'latex'");
  const auto sys = generate(cfg.diagram);
  return {{"ok", true},
          {"count", equation_count(sys.n_levels())},
          {"text", render(sys, fmt == "plain" ? RenderFormat::Plain : RenderFormat::Latex)}};
}

json op_evolve(const json& req) {
  const auto cfg = request_config(req);
  const auto sys = generate(cfg.diagram);
  const auto traj = evolve(compile(sys, cfg.params), initial_state(cfg), cfg.solver);
  const auto obs = observables(cfg);
  return {{"ok", true},
          {"columns", observable_columns(obs)},
          {"t_s", traj.times},
          {"series", series(obs, traj.states)},
          {"max_trace_error", trace_error(traj)}};
}

json op_sweep(const json& req) {
  const auto cfg = request_config(req);
  if (!cfg.sweep) throw RequestError("config has no 'sweep' block");
  const auto sys = generate(cfg.diagram);
  SweepOptions opts;
  opts.initial = initial_state(cfg);
  const auto spec = sweep(sys, cfg.params, cfg.diagram, *cfg.sweep, opts);
  const auto obs = observables(cfg);
  json out = {{"ok", true},
              {"columns", observable_columns(obs)},
              {"detuning_mhz", spec.detunings_mhz},
              {"series", series(obs, spec.final_states)},
              {"max_trace_error", trace_error(spec)}};
  if (auto it = req.find("analyze"); it != req.end()) {
    const std::string col = string_or(req, "analyze", "");
    if (!out["series"].contains(col)) throw RequestError("cannot analyze unknown column '" + col + "'");
    out["analysis"] = analyze_column(spec.detunings_mhz, out["series"][col].get<std::vector<double>>());
  }
  return out;
}

json op_codegen(const json& req) {
  const auto cfg = request_config(req);
  const std::string mode = string_or(req, "mode", "temporal");
  if (mode != "temporal" && mode != "detuning") throw RequestError("mode must be 'temporal' or 'detuning'");
  const auto sys = generate(cfg.diagram);
  CodegenRequest cg;
  cg.system = &sys;
  cg.diagram = &cfg.diagram;
  cg.params = &cfg.params;
  cg.mode = mode == "temporal" ? CodegenMode::Temporal : CodegenMode::Detuning;
  cg.solver = cfg.solver;
  if (cg.mode == CodegenMode::Detuning) cg.sweep = cfg.sweep;
  cg.initial = initial_state(cfg);
  cg.observables = observables(cfg);
  const auto src = emit(cg);
  json manifest = json::array();
  for (const auto& m : src.manifest) manifest.push_back({{"symbol", m.symbol}, {"group", m.group}, {"line", m.line}});
  return {{"ok", true}, {"source", src.text}, {"manifest", manifest}};
}

json op_preset(const json& req) {
  PresetName name;
  try {
    name = parse_preset_name(string_or(req, "name", ""));
  } catch (const std::invalid_argument& e) {
    throw RequestError(e.what());
  }
  return {{"ok", true}, {"config", to_json(preset_document(name))}};
}

}  // namespace

json handle_request(const json& request) {
  try {
    if (!request.is_object()) throw RequestError("request must be a JSON object");
    const std::string op = string_or(request, "op", "");
    if (op == "validate") return op_validate(request);
    if (op == "equations") return op_equations(request);
    if (op == "evolve") return op_evolve(request);
    if (op == "sweep") return op_sweep(request);
    if (op == "codegen") return op_codegen(request);
    if (op == "preset") return op_preset(request);
    throw RequestError("unknown op '" + op + "'");
  } catch (const RequestError& e) {
    return failure("request", {e.what()});
  } catch (const ConfigError& e) {
    return failure("config", {e.what()});
  } catch (const LoopInconsistencyError& e) {
    return failure("loop_inconsistency", e.messages());
  } catch (const ValidationError& e) {
    return failure("validation", e.messages());
  } catch (const UnboundHandleError& e) {
    return failure("unbound", {e.what()});
  } catch (const SolverError& e) {
    return failure("solver", {e.what()});
  } catch (const CodegenError& e) {
    return failure("codegen", {e.what()});
  } catch (const std::exception& e) {
    return failure("internal", {e.what()});
  }
}

}  // namespace blochgen
