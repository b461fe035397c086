#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochgen/dynamics.hpp"
#include "blochgen/state.hpp"

namespace blochgen {

/// Shortest-round-trip-safe formatting with 17 significant digits.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<ElementId>& obs);
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, const std::vector<ElementId>& obs);

/// FWHM / Lorentzian fit / peaks of one spectrum column, as JSON.
nlohmann::json analyze_column(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace blochgen
