#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochgen/dynamics.hpp"
#include "blochgen/level_model.hpp"
#include "blochgen/parameters.hpp"
#include "blochgen/presets.hpp"
#include "blochgen/state.hpp"

namespace blochgen {

struct CoherenceValue {
  int i = 0;
  int j = 0;
  double re = 0.0;
  double im = 0.0;
};

struct InitialStateSpec {
  std::vector<double> populations;
  std::vector<CoherenceValue> coherences;
};

/// The JSON document shared by the CLI and the companion UI. User-facing
/// frequencies are ordinary MHz; `params` holds them converted to rad/s.
struct ConfigDocument {
  LevelDiagram diagram;
  ParameterSet params;
  std::optional<InitialStateSpec> initial_state;
  SolverConfig solver;
  std::optional<SweepConfig> sweep;
  std::vector<ElementId> observables;
  /// Top-level blocks the core does not interpret (e.g. "studio" layout),
  /// carried through unchanged.
  nlohmann::json extensions = nlohmann::json::object();
};

/// Throws ConfigError on schema violations. Does not run validate().
ConfigDocument parse_config(const nlohmann::json& doc);
ConfigDocument load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ConfigDocument& config);
void save_config(const ConfigDocument& config, const std::filesystem::path& path);

/// Preset diagram plus the integration and sweep settings it is studied with.
ConfigDocument preset_document(PresetName name);

/// Explicit initial state if given, otherwise default_initial_state.
StateVector initial_state(const ConfigDocument& config);

/// Observables from the document, or every population when none are listed.
std::vector<ElementId> observables(const ConfigDocument& config);

/// "rho_2_2" / "sigma_1_3" <-> ElementId. Throws ConfigError.
ElementId parse_observable(const std::string& name);
std::string observable_name(ElementId e);

/// CSV column names for an observable list (coherences expand to re/im).
std::vector<std::string> observable_columns(const std::vector<ElementId>& obs);
/// Slot indices matching observable_columns.
std::vector<std::size_t> observable_slots(const StateLayout& layout, const std::vector<ElementId>& obs);

}  // namespace blochgen
