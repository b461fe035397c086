#include "blochgen/report.hpp"

#include <cstdio>
#include <stdexcept>

#include "blochgen/analysis.hpp"
#include "blochgen/config.hpp"

namespace blochgen {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_table(std::ostream& out, const char* first, const std::vector<double>& x, const std::vector<StateVector>& states,
                 const std::vector<ElementId>& obs) {
  out << first;
  for (const auto& c : observable_columns(obs)) out << ',' << c;
  out << '\n';
  if (x.empty()) return;
  const auto slots = observable_slots(states.front().layout(), obs);
  for (std::size_t k = 0; k < x.size(); ++k) {
    out << format_double(x[k]);
    for (auto s : slots) out << ',' << format_double(states[k][s]);
    out << '\n';
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<ElementId>& obs) {
  write_table(out, "t_s", traj.times, traj.states, obs);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, const std::vector<ElementId>& obs) {
  write_table(out, "detuning_mhz", spectrum.detunings_mhz, spectrum.final_states, obs);
}

nlohmann::json analyze_column(const std::vector<double>& x, const std::vector<double>& y) {
  nlohmann::json out = nlohmann::json::object();
  const Curve curve{x, y};
  curve.check();
  try {
    out["fwhm_mhz"] = fwhm_interpolated(curve);
  } catch (const std::domain_error& e) {
    out["fwhm_mhz"] = nullptr;
    out["fwhm_note"] = e.what();
  }
  try {
    const auto fit = lorentzian_fit(curve);
    out["lorentzian"] = {{"center_mhz", fit.center},         {"fwhm_mhz", fit.fwhm},
                         {"amplitude", fit.amplitude},        {"offset", fit.offset},
                         {"residual_rms", fit.residual_rms}, {"iterations", fit.iterations},
                         {"converged", fit.converged}};
  } catch (const std::domain_error& e) {
    out["lorentzian"] = nullptr;
  }
  nlohmann::json peaks = nlohmann::json::array();
  for (const auto& p : peak_find(curve)) peaks.push_back({{"x_mhz", p.x}, {"y", p.y}});
  out["peaks"] = std::move(peaks);
  if (out["peaks"].size() == 2) out["peak_separation_mhz"] = out["peaks"][1]["x_mhz"].get<double>() - out["peaks"][0]["x_mhz"].get<double>();
  return out;
}

}  // namespace blochgen
