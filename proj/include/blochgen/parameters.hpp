#pragma once

#include <map>

#include "blochgen/level_model.hpp"

namespace blochgen {

/// Numeric bindings (rad/s) for every symbol of a generated Bloch system.
struct ParameterSet {
  std::map<LevelPair, double> rabi;     // keyed by the coupled pair
  std::map<Channel, double> decay;
  std::map<LevelPair, double> gamma;    // overrides; missing pairs use derived_gammas
  std::map<int, double> mode_detuning;  // omega_m minus the transition frequency
};

}  // namespace blochgen
