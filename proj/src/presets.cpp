#include "blochgen/presets.hpp"

#include <cstdlib>
#include <stdexcept>

#include "blochgen/units.hpp"

namespace blochgen {

namespace {

// Twelve-level F=2 -> F'=3 manifold: levels 1..5 ground m=-2..2,
// levels 6..12 excited m'=-3..3.
int ground_level(int m) { return m + 3; }
int excited_level(int m) { return m + 9; }

Preset twelve_level(bool sigma_plus) {
  Preset p;
  auto& d = p.diagram;
  for (int m = -2; m <= 2; ++m)
    d.levels.push_back({ground_level(m), 0.0, "g" + std::to_string(m), m});
  for (int m = -3; m <= 3; ++m)
    d.levels.push_back({excited_level(m), 1.0, "e" + std::to_string(m), m});
  d.modes.push_back({1, sigma_plus ? "sigma+" : "pi"});
  for (int m = -2; m <= 2; ++m)
    d.couplings.push_back({excited_level(sigma_plus ? m + 1 : m), ground_level(m), 1});
  for (int me = -3; me <= 3; ++me)
    for (int mg = -2; mg <= 2; ++mg)
      if (std::abs(me - mg) <= 1) d.decays.push_back({excited_level(me), ground_level(mg)});

  const double decay = preset_decay_rate();
  for (const auto& c : d.couplings) p.params.rabi[c.pair()] = decay;
  p.params.decay = default_branching(d, decay);
  p.params.mode_detuning[1] = 0.0;
  return p;
}

}  // namespace

double preset_decay_rate() { return mhz_to_rad(5.0); }

Preset make_preset(PresetName name) {
  Preset p;
  auto& d = p.diagram;
  const double decay = preset_decay_rate();
  switch (name) {
    case PresetName::TwoLevel:
      d.levels = {{1, 0.0, "g", {}}, {2, 1.0, "e", {}}};
      d.modes = {{1, "a"}};
      d.couplings = {{2, 1, 1}};
      d.decays = {{2, 1}};
      p.params.rabi[{1, 2}] = decay;
      p.params.decay = default_branching(d, decay);
      p.params.mode_detuning[1] = 0.0;
      return p;
    case PresetName::Lambda:
      d.levels = {{1, 0.0, "g1", {}}, {2, 1.0, "e", {}}, {3, 0.1, "g2", {}}};
      d.modes = {{1, "a"}, {2, "b"}};
      d.couplings = {{2, 1, 1}, {2, 3, 2}};
      d.decays = {{2, 1}, {2, 3}};
      p.params.rabi[{1, 2}] = mhz_to_rad(0.5);
      p.params.rabi[{2, 3}] = mhz_to_rad(0.5);
      p.params.decay = default_branching(d, decay);
      p.params.mode_detuning[1] = 0.0;
      p.params.mode_detuning[2] = 0.0;
      return p;
    case PresetName::TwelveSigmaPlus:
      return twelve_level(true);
    case PresetName::TwelvePi:
      return twelve_level(false);
  }
  throw std::invalid_argument("unknown preset");
}

PresetName parse_preset_name(std::string_view name) {
  for (auto p : all_presets())
    if (preset_key(p) == name) return p;
  throw std::invalid_argument("unknown preset: " + std::string(name));
}

std::string_view preset_key(PresetName name) {
  switch (name) {
    case PresetName::TwoLevel: return "two_level";
    case PresetName::Lambda: return "lambda";
    case PresetName::TwelveSigmaPlus: return "twelve_sigma_plus";
    case PresetName::TwelvePi: return "twelve_pi";
  }
  return "";
}

std::vector<PresetName> all_presets() {
  return {PresetName::TwoLevel, PresetName::Lambda, PresetName::TwelveSigmaPlus, PresetName::TwelvePi};
}

}  // namespace blochgen
