#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <sstream>

#include "blochgen/codegen.hpp"
#include "blochgen/config.hpp"
#include "blochgen/errors.hpp"
#include "blochgen/liouvillian.hpp"
#include "blochgen/report.hpp"
#include "blochgen/server.hpp"

namespace blochgen::cli {

namespace {

const char* group_name(int g) {
  switch (g) {
    case 1: return "integration";
    case 2: return "Rabi frequencies";
    case 3: return "decays";
    case 4: return "initial conditions";
    case 5: return "detunings";
  }
  return "other";
}

// Writes to the named file, or to `fallback` when the name is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : to_file_(!path.empty() && path != "-") {
    if (to_file_) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot write " + path);
    }
    stream_ = to_file_ ? &file_ : &fallback;
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return to_file_; }

 private:
  bool to_file_;
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_validate(const std::string& path, std::ostream& out) {
  const auto cfg = load_config(path);
  const auto report = validate(cfg.diagram);
  for (const auto& m : report.messages()) out << m << '\n';
  if (report.ok()) out << "ok: " << cfg.diagram.size() << " levels, " << equation_count(cfg.diagram.size()) << " equations\n";
  return report.ok() ? kOk : kInvalid;
}

int cmd_equations(const std::string& path, const std::string& format, std::ostream& out) {
  const auto cfg = load_config(path);
  const auto sys = generate(cfg.diagram);
  out << "N(N+1)/2 = " << equation_count(sys.n_levels()) << " equations\n";
  out << render(sys, format == "latex" ? RenderFormat::Latex : RenderFormat::Plain);
  return kOk;
}

int cmd_evolve(const std::string& path, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const auto cfg = load_config(path);
  const auto sys = generate(cfg.diagram);
  const auto traj = evolve(compile(sys, cfg.params), initial_state(cfg), cfg.solver);
  Sink sink(out_path, out);
  write_trajectory_csv(sink.stream(), traj, observables(cfg));
  (sink.to_file() ? out : err) << "max trace error: " << format_double(trace_error(traj)) << '\n';
  return kOk;
}

int cmd_sweep(const std::string& path, const std::string& out_path, const std::string& analyze,
              unsigned workers, std::ostream& out, std::ostream& err) {
  const auto cfg = load_config(path);
  if (!cfg.sweep) throw ConfigError(path + ": no 'sweep' block");
  const auto obs = observables(cfg);
  std::optional<std::size_t> column;
  if (!analyze.empty()) {
    const auto cols = observable_columns(obs);
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (cols[c] == analyze) column = c;
    if (!column) throw ConfigError("cannot analyze '" + analyze + "': not among the observables");
  }
  const auto sys = generate(cfg.diagram);
  SweepOptions opts;
  opts.workers = workers;
  opts.initial = initial_state(cfg);
  const auto spec = sweep(sys, cfg.params, cfg.diagram, *cfg.sweep, opts);
  Sink sink(out_path, out);
  write_spectrum_csv(sink.stream(), spec, obs);
  std::ostream& info = sink.to_file() ? out : err;
  info << "max trace error: " << format_double(trace_error(spec)) << '\n';
  if (column) {
    const auto slot = observable_slots(sys.layout(), obs)[*column];
    std::vector<double> y;
    for (const auto& s : spec.final_states) y.push_back(s[slot]);
    nlohmann::json report = {{"column", analyze}, {"analysis", analyze_column(spec.detunings_mhz, y)}};
    info << report.dump(2) << '\n';
  }
  return kOk;
}

int cmd_codegen(const std::string& path, const std::string& mode, const std::string& out_path, std::ostream& out) {
  const auto cfg = load_config(path);
  const auto sys = generate(cfg.diagram);
  CodegenRequest req;
  req.system = &sys;
  req.diagram = &cfg.diagram;
  req.params = &cfg.params;
  req.mode = mode == "detuning" ? CodegenMode::Detuning : CodegenMode::Temporal;
  req.solver = cfg.solver;
  if (req.mode == CodegenMode::Detuning) req.sweep = cfg.sweep;
  req.initial = initial_state(cfg);
  req.observables = observables(cfg);
  const auto src = emit(req);
  Sink sink(out_path, out);
  sink.stream() << src.text;
  if (sink.to_file()) {
    std::map<int, std::vector<std::string>> groups;
    for (const auto& m : src.manifest) groups[m.group].push_back(m.symbol + ":" + std::to_string(m.line));
    out << "wrote " << out_path << " (" << src.manifest.size() << " adjustable symbols)\n";
    for (const auto& [g, symbols] : groups) {
      out << "  Adjustments " << g << " - " << group_name(g) << ":";
      for (const auto& s : symbols) out << ' ' << s;
      out << '\n';
    }
  }
  return kOk;
}

int cmd_preset(const std::string& name, const std::string& out_path, std::ostream& out) {
  PresetName preset;
  try {
    preset = parse_preset_name(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Sink sink(out_path, out);
  sink.stream() << to_json(preset_document(preset)).dump(2) << '\n';
  return kOk;
}

int cmd_serve(const std::string& host, int port, std::ostream& out, std::ostream& err) {
  Server server;
  if (!server.bind(host, port)) {
    err << "cannot bind " << host << ":" << port << '\n';
    return kInput;
  }
  out << "listening on http://" << host << ":" << server.port() << "/api" << std::endl;
  server.listen();
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optical Bloch equation generator and solver", "blochgen"};
  app.require_subcommand(1);

  std::string config, format = "plain", out_path, mode = "temporal", analyze, preset, host = "127.0.0.1";
  int port = 8765;
  unsigned workers = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Check a diagram config");
  validate_cmd->add_option("config", config, "Config file")->required();

  auto* equations_cmd = app.add_subcommand("equations", "Print the Bloch equations");
  equations_cmd->add_option("config", config, "Config file")->required();
  equations_cmd->add_option("--format", format, "plain or latex")->check(CLI::IsMember({"plain", "latex"}));

  auto* evolve_cmd = app.add_subcommand("evolve", "Time evolution to CSV");
  evolve_cmd->add_option("config", config, "Config file")->required();
  evolve_cmd->add_option("--out,-o", out_path, "CSV output (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Detuning spectrum to CSV");
  sweep_cmd->add_option("config", config, "Config file")->required();
  sweep_cmd->add_option("--out,-o", out_path, "CSV output (default stdout)");
  sweep_cmd->add_option("--analyze", analyze, "Column to analyze (FWHM, Lorentzian fit, peaks)");
  sweep_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* codegen_cmd = app.add_subcommand("codegen", "Emit a standalone C solver");
  codegen_cmd->add_option("config", config, "Config file")->required();
  codegen_cmd->add_option("--mode", mode, "temporal or detuning")->check(CLI::IsMember({"temporal", "detuning"}));
  codegen_cmd->add_option("--out,-o", out_path, "C output (default stdout)");

  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON request endpoint");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");
  serve_cmd->add_option("--host", host, "Bind address");

  auto* preset_cmd = app.add_subcommand("preset", "Write a preset config");
  preset_cmd->add_option("name", preset, "two_level, lambda, twelve_sigma_plus or twelve_pi")->required();
  preset_cmd->add_option("--out,-o", out_path, "JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*validate_cmd) return cmd_validate(config, out);
    if (*equations_cmd) return cmd_equations(config, format, out);
    if (*evolve_cmd) return cmd_evolve(config, out_path, out, err);
    if (*sweep_cmd) return cmd_sweep(config, out_path, analyze, workers, out, err);
    if (*codegen_cmd) return cmd_codegen(config, mode, out_path, out);
    if (*serve_cmd) return cmd_serve(host, port, out, err);
    if (*preset_cmd) return cmd_preset(preset, out_path, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const ValidationError& e) {
    for (const auto& m : e.messages()) err << m << '\n';
    return kInvalid;
  } catch (const SolverError& e) {
    err << "solver error at step " << e.step();
    if (e.in_sweep()) err << " (detuning " << format_double(e.detuning_mhz()) << " MHz)";
    err << ": " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kInput;
}

}  // namespace blochgen::cli
