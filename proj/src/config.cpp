#include "blochgen/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "blochgen/errors.hpp"
#include "blochgen/units.hpp"

namespace blochgen {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownTopLevel = {"diagram", "initial_state", "solver", "sweep", "observables"};

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing '" + key + "'");
  return *it;
}

int int_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

double num_field(const json& obj, const char* key, const std::string& where) {
  return number(field(obj, key, where), where + ": '" + key + "'");
}

double num_or(const json& obj, const char* key, double fallback, const std::string& where) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + ": '" + key + "'");
}

const json& array_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw ConfigError(where + ": '" + key + "' must be an array");
  return v;
}

std::string at(const std::string& where, std::size_t k) { return where + "[" + std::to_string(k) + "]"; }

void parse_diagram(const json& d, ConfigDocument& out) {
  check_keys(d, "diagram", {"levels", "modes", "couplings", "decays", "gamma_overrides"});
  const auto& levels = array_field(d, "levels", "diagram");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto w = at("diagram.levels", k);
    const auto& l = levels[k];
    check_keys(l, w, {"index", "energy", "label", "m_f"});
    Level lvl;
    lvl.index = int_field(l, "index", w);
    lvl.energy = num_field(l, "energy", w);
    if (auto it = l.find("label"); it != l.end()) {
      if (!it->is_string()) throw ConfigError(w + ": 'label' must be a string");
      lvl.label = it->get<std::string>();
    }
    if (l.contains("m_f")) lvl.m_f = int_field(l, "m_f", w);
    out.diagram.levels.push_back(std::move(lvl));
  }
  const auto& modes = array_field(d, "modes", "diagram");
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto w = at("diagram.modes", k);
    const auto& m = modes[k];
    check_keys(m, w, {"id", "name", "detuning_mhz"});
    FieldMode mode;
    mode.id = int_field(m, "id", w);
    if (auto it = m.find("name"); it != m.end()) {
      if (!it->is_string()) throw ConfigError(w + ": 'name' must be a string");
      mode.name = it->get<std::string>();
    }
    out.params.mode_detuning[mode.id] = mhz_to_rad(num_or(m, "detuning_mhz", 0.0, w));
    out.diagram.modes.push_back(std::move(mode));
  }
  const auto& couplings = array_field(d, "couplings", "diagram");
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    const auto w = at("diagram.couplings", k);
    const auto& c = couplings[k];
    check_keys(c, w, {"upper", "lower", "mode", "rabi_mhz"});
    Coupling cp{int_field(c, "upper", w), int_field(c, "lower", w), int_field(c, "mode", w)};
    out.params.rabi[cp.pair()] = mhz_to_rad(num_field(c, "rabi_mhz", w));
    out.diagram.couplings.push_back(cp);
  }
  const auto& decays = array_field(d, "decays", "diagram");
  for (std::size_t k = 0; k < decays.size(); ++k) {
    const auto w = at("diagram.decays", k);
    const auto& c = decays[k];
    check_keys(c, w, {"upper", "lower", "rate_mhz"});
    DecayChannel dc{int_field(c, "upper", w), int_field(c, "lower", w)};
    out.params.decay[dc.channel()] = mhz_to_rad(num_field(c, "rate_mhz", w));
    out.diagram.decays.push_back(dc);
  }
  if (auto it = d.find("gamma_overrides"); it != d.end()) {
    if (!it->is_array()) throw ConfigError("diagram: 'gamma_overrides' must be an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto w = at("diagram.gamma_overrides", k);
      const auto& g = (*it)[k];
      check_keys(g, w, {"i", "j", "rate_mhz"});
      const int i = int_field(g, "i", w);
      const int j = int_field(g, "j", w);
      if (i == j) throw ConfigError(w + ": a coherence needs two different levels");
      out.params.gamma[LevelPair::of(i, j)] = mhz_to_rad(num_field(g, "rate_mhz", w));
    }
  }
}

InitialStateSpec parse_initial(const json& s) {
  check_keys(s, "initial_state", {"populations", "coherences"});
  InitialStateSpec spec;
  const auto& pops = array_field(s, "populations", "initial_state");
  for (std::size_t k = 0; k < pops.size(); ++k) spec.populations.push_back(number(pops[k], at("initial_state.populations", k)));
  if (auto it = s.find("coherences"); it != s.end()) {
    if (!it->is_array()) throw ConfigError("initial_state: 'coherences' must be an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto w = at("initial_state.coherences", k);
      const auto& c = (*it)[k];
      check_keys(c, w, {"i", "j", "re", "im"});
      spec.coherences.push_back({int_field(c, "i", w), int_field(c, "j", w), num_or(c, "re", 0.0, w), num_or(c, "im", 0.0, w)});
    }
  }
  return spec;
}

SolverConfig parse_solver(const json& s) {
  check_keys(s, "solver", {"t_total_s", "h_s", "stride"});
  SolverConfig cfg;
  cfg.t_total = num_or(s, "t_total_s", cfg.t_total, "solver");
  cfg.h = num_or(s, "h_s", cfg.h, "solver");
  if (s.contains("stride")) cfg.stride = [&] {
      const json& v = s["stride"];
      if (!v.is_number_integer()) throw ConfigError("solver: 'stride' must be an integer");
      return v.get<long long>();
    }();
  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  return cfg;
}

SweepConfig parse_sweep(const json& s) {
  check_keys(s, "sweep", {"width_mhz", "step_mhz", "swept_mode", "t_interaction_s", "h_s"});
  SweepConfig cfg;
  cfg.width_mhz = num_or(s, "width_mhz", cfg.width_mhz, "sweep");
  cfg.step_mhz = num_or(s, "step_mhz", cfg.step_mhz, "sweep");
  if (s.contains("swept_mode")) cfg.swept_mode = int_field(s, "swept_mode", "sweep");
  cfg.t_interaction = num_or(s, "t_interaction_s", cfg.t_interaction, "sweep");
  cfg.h = num_or(s, "h_s", cfg.h, "sweep");
  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }
  return cfg;
}

int parse_index(const std::string& text, const std::string& name) {
  if (text.empty() || text.size() > 3 || text.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("bad observable '" + name + "'");
  return std::stoi(text);
}

}  // namespace

ConfigDocument parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  ConfigDocument out;
  parse_diagram(field(doc, "diagram", "config"), out);
  if (auto it = doc.find("initial_state"); it != doc.end() && !it->is_null()) out.initial_state = parse_initial(*it);
  if (auto it = doc.find("solver"); it != doc.end()) out.solver = parse_solver(*it);
  if (auto it = doc.find("sweep"); it != doc.end() && !it->is_null()) out.sweep = parse_sweep(*it);
  if (auto it = doc.find("observables"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("config: 'observables' must be an array");
    for (const auto& o : *it) {
      if (!o.is_string()) throw ConfigError("config: observables are strings like \"rho_2_2\"");
      out.observables.push_back(parse_observable(o.get<std::string>()));
    }
  }
  for (const auto& [key, value] : doc.items())
    if (!kKnownTopLevel.count(key)) out.extensions[key] = value;
  return out;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ConfigDocument& c) {
  json doc = json::object();
  json levels = json::array();
  for (const auto& l : c.diagram.levels) {
    json j = {{"index", l.index}, {"energy", l.energy}, {"label", l.label}};
    if (l.m_f) j["m_f"] = *l.m_f;
    levels.push_back(std::move(j));
  }
  json modes = json::array();
  for (const auto& m : c.diagram.modes) {
    auto it = c.params.mode_detuning.find(m.id);
    modes.push_back({{"id", m.id}, {"name", m.name}, {"detuning_mhz", it == c.params.mode_detuning.end() ? 0.0 : rad_to_mhz(it->second)}});
  }
  json couplings = json::array();
  for (const auto& cp : c.diagram.couplings) {
    auto it = c.params.rabi.find(cp.pair());
    couplings.push_back({{"upper", cp.upper}, {"lower", cp.lower}, {"mode", cp.mode},
                         {"rabi_mhz", it == c.params.rabi.end() ? 0.0 : rad_to_mhz(it->second)}});
  }
  json decays = json::array();
  for (const auto& dc : c.diagram.decays) {
    auto it = c.params.decay.find(dc.channel());
    decays.push_back({{"upper", dc.upper}, {"lower", dc.lower},
                      {"rate_mhz", it == c.params.decay.end() ? 0.0 : rad_to_mhz(it->second)}});
  }
  json diagram = {{"levels", levels}, {"modes", modes}, {"couplings", couplings}, {"decays", decays}};
  if (!c.params.gamma.empty()) {
    json g = json::array();
    for (const auto& [pair, v] : c.params.gamma) g.push_back({{"i", pair.lo}, {"j", pair.hi}, {"rate_mhz", rad_to_mhz(v)}});
    diagram["gamma_overrides"] = std::move(g);
  }
  doc["diagram"] = std::move(diagram);
  if (c.initial_state) {
    json s = {{"populations", c.initial_state->populations}};
    if (!c.initial_state->coherences.empty()) {
      json coh = json::array();
      for (const auto& v : c.initial_state->coherences) coh.push_back({{"i", v.i}, {"j", v.j}, {"re", v.re}, {"im", v.im}});
      s["coherences"] = std::move(coh);
    }
    doc["initial_state"] = std::move(s);
  }
  doc["solver"] = {{"t_total_s", c.solver.t_total}, {"h_s", c.solver.h}, {"stride", c.solver.stride}};
  if (c.sweep)
    doc["sweep"] = {{"width_mhz", c.sweep->width_mhz}, {"step_mhz", c.sweep->step_mhz}, {"swept_mode", c.sweep->swept_mode},
                    {"t_interaction_s", c.sweep->t_interaction}, {"h_s", c.sweep->h}};
  if (!c.observables.empty()) {
    json obs = json::array();
    for (const auto& e : c.observables) obs.push_back(observable_name(e));
    doc["observables"] = std::move(obs);
  }
  for (const auto& [key, value] : c.extensions.items()) doc[key] = value;
  return doc;
}

void save_config(const ConfigDocument& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_json(config).dump(2) << '\n';
}

ConfigDocument preset_document(PresetName name) {
  Preset p = make_preset(name);
  ConfigDocument doc;
  doc.diagram = std::move(p.diagram);
  doc.params = std::move(p.params);
  switch (name) {
    case PresetName::TwoLevel:
      doc.sweep = SweepConfig{200.0, 1.0, 1, 1e-6, 5e-12};
      doc.observables = {{1, 1}, {2, 2}, {1, 2}};
      break;
    case PresetName::Lambda:
      // Dark-state pumping is slow at these Rabi frequencies; 10 us lets it finish.
      doc.solver.t_total = 1e-5;
      doc.solver.stride = 1000;
      doc.sweep = SweepConfig{40.0, 0.2, 1, 1e-5, 5e-12};
      doc.observables = {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {1, 3}};
      break;
    case PresetName::TwelveSigmaPlus:
    case PresetName::TwelvePi:
      break;
  }
  return doc;
}

StateVector initial_state(const ConfigDocument& config) {
  if (!config.initial_state) return default_initial_state(config.diagram);
  const int n = config.diagram.size();
  const auto& spec = *config.initial_state;
  if (static_cast<int>(spec.populations.size()) != n)
    throw ConfigError("initial_state: expected " + std::to_string(n) + " populations, got " +
                      std::to_string(spec.populations.size()));
  StateVector s(n);
  for (int i = 1; i <= n; ++i) s.set_population(i, spec.populations[i - 1]);
  for (const auto& c : spec.coherences) {
    if (c.i < 1 || c.j < 1 || c.i > n || c.j > n || c.i == c.j)
      throw ConfigError("initial_state: bad coherence indices " + std::to_string(c.i) + "," + std::to_string(c.j));
    s.set_coherence(c.i, c.j, {c.re, c.im});
  }
  return s;
}

std::vector<ElementId> observables(const ConfigDocument& config) {
  if (!config.observables.empty()) return config.observables;
  std::vector<ElementId> out;
  for (int i = 1; i <= config.diagram.size(); ++i) out.push_back({i, i});
  return out;
}

ElementId parse_observable(const std::string& name) {
  std::string head, a, b;
  {
    std::istringstream is(name);
    std::getline(is, head, '_');
    std::getline(is, a, '_');
    std::getline(is, b);
  }
  if (head != "rho" && head != "sigma") throw ConfigError("bad observable '" + name + "'");
  int i = parse_index(a, name);
  int j = parse_index(b, name);
  if (i < 1 || j < 1) throw ConfigError("bad observable '" + name + "'");
  if (head == "sigma" && i == j) throw ConfigError("observable '" + name + "': a coherence needs two different levels");
  if (i > j) std::swap(i, j);
  return {i, j};
}

std::string observable_name(ElementId e) {
  return std::string(e.is_population() ? "rho_" : "sigma_") + std::to_string(e.i) + "_" + std::to_string(e.j);
}

std::vector<std::string> observable_columns(const std::vector<ElementId>& obs) {
  std::vector<std::string> out;
  for (const auto& e : obs) {
    if (e.is_population()) {
      out.push_back(observable_name(e));
    } else {
      const auto tail = std::to_string(e.i) + "_" + std::to_string(e.j);
      out.push_back("re_sigma_" + tail);
      out.push_back("im_sigma_" + tail);
    }
  }
  return out;
}

std::vector<std::size_t> observable_slots(const StateLayout& layout, const std::vector<ElementId>& obs) {
  std::vector<std::size_t> out;
  for (const auto& e : obs) {
    if (e.i < 1 || e.j > layout.n_levels() || e.i > e.j)
      throw ConfigError("observable " + observable_name(e) + " is out of range");
    if (e.is_population()) {
      out.push_back(layout.population_slot(e.i));
    } else {
      out.push_back(layout.re_slot(e.i, e.j));
      out.push_back(layout.im_slot(e.i, e.j));
    }
  }
  return out;
}

}  // namespace blochgen
