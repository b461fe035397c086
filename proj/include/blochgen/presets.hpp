#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blochgen/level_model.hpp"
#include "blochgen/parameters.hpp"

namespace blochgen {

enum class PresetName { TwoLevel, Lambda, TwelveSigmaPlus, TwelvePi };

struct Preset {
  LevelDiagram diagram;
  ParameterSet params;
};

/// Total decay rate of every excited state in all presets: 2*Pi*5 MHz.
double preset_decay_rate();

Preset make_preset(PresetName name);

/// Accepts "two_level", "lambda", "twelve_sigma_plus", "twelve_pi".
/// Throws std::invalid_argument for anything else.
PresetName parse_preset_name(std::string_view name);
std::string_view preset_key(PresetName name);
std::vector<PresetName> all_presets();

}  // namespace blochgen
