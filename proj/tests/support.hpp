#pragma once

// Shared fixtures: small diagrams, a dense density-matrix reference for the
// right-hand side, and a helper that compiles and runs emitted C code.

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blochgen/level_model.hpp"
#include "blochgen/parameters.hpp"
#include "blochgen/state.hpp"
#include "blochgen/units.hpp"

namespace testing {

using blochgen::Channel;
using blochgen::Coupling;
using blochgen::DecayChannel;
using blochgen::FieldMode;
using blochgen::Level;
using blochgen::LevelDiagram;
using blochgen::LevelPair;
using blochgen::ParameterSet;
using blochgen::StateVector;
using cplx = std::complex<double>;

inline LevelDiagram two_level() {
  LevelDiagram d;
  d.levels = {{1, 0.0, "g", {}}, {2, 1.0, "e", {}}};
  d.modes = {{1, "a"}};
  d.couplings = {{2, 1, 1}};
  d.decays = {{2, 1}};
  return d;
}

/// Diamond: 1 -> 2 -> 4 and 1 -> 3 -> 4. With three modes the
/// loop closes only if the fourth coupling reuses a consistent mode.
inline LevelDiagram diamond(bool consistent) {
  LevelDiagram d;
  d.levels = {{1, 0.0, "g", {}}, {2, 1.0, "a", {}}, {3, 1.2, "b", {}}, {4, 2.0, "e", {}}};
  d.modes = {{1, "p"}, {2, "q"}, {3, "r"}};
  if (consistent) {
    d.modes.pop_back();
    d.couplings = {{2, 1, 1}, {3, 1, 2}, {4, 2, 2}, {4, 3, 1}};
  } else {
    d.couplings = {{2, 1, 1}, {3, 1, 2}, {4, 2, 3}, {4, 3, 1}};
  }
  d.decays = {{2, 1}, {3, 1}, {4, 2}, {4, 3}};
  return d;
}

/// Connected random diagram: a spanning tree of couplings, one mode each, and
/// a random set of downward decays.
inline LevelDiagram random_diagram(std::mt19937& rng, int n) {
  LevelDiagram d;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> energies;
  for (int i = 0; i < n; ++i) energies.push_back(static_cast<double>(i) + 0.5 * u(rng));
  std::shuffle(energies.begin(), energies.end(), rng);
  for (int i = 1; i <= n; ++i) d.levels.push_back({i, energies[static_cast<std::size_t>(i - 1)], "l" + std::to_string(i), {}});
  for (int i = 2; i <= n; ++i) {
    const int j = std::uniform_int_distribution<int>(1, i - 1)(rng);
    const bool i_up = energies[static_cast<std::size_t>(i - 1)] > energies[static_cast<std::size_t>(j - 1)];
    d.modes.push_back({i - 1, "m" + std::to_string(i - 1)});
    d.couplings.push_back({i_up ? i : j, i_up ? j : i, i - 1});
  }
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (energies[static_cast<std::size_t>(a - 1)] > energies[static_cast<std::size_t>(b - 1)] && u(rng) < 0.5)
        d.decays.push_back({a, b});
  return d;
}

inline ParameterSet random_params(std::mt19937& rng, const LevelDiagram& d) {
  std::uniform_real_distribution<double> mhz(0.1, 10.0);
  std::uniform_real_distribution<double> det(-20.0, 20.0);
  ParameterSet p;
  for (const auto& c : d.couplings) p.rabi[c.pair()] = blochgen::mhz_to_rad(mhz(rng));
  for (const auto& c : d.decays) p.decay[c.channel()] = blochgen::mhz_to_rad(mhz(rng));
  for (const auto& m : d.modes) p.mode_detuning[m.id] = blochgen::mhz_to_rad(det(rng));
  return p;
}

inline StateVector random_state(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StateVector s(n);
  for (auto& v : s.values()) v = u(rng);
  return s;
}

/// Dense reference: d(rho)/dt = -i[H_drive, rho] - i (theta_j - theta_i) rho_ij
/// + decay terms, with H_drive = sum Omega (|l><u| + |u><l|). theta is
/// accumulated by depth-first search from the lowest index of each connected
/// component; pairs in different components carry no detuning.
inline StateVector dense_rhs(const LevelDiagram& d, const ParameterSet& p, const StateVector& x) {
  const int n = d.size();
  std::vector<double> theta(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> component(static_cast<std::size_t>(n + 1), 0);
  for (int root = 1; root <= n; ++root) {
    if (component[static_cast<std::size_t>(root)]) continue;
    component[static_cast<std::size_t>(root)] = root;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (const auto& c : d.couplings) {
        for (int side = 0; side < 2; ++side) {
          const int from = side ? c.upper : c.lower;
          const int to = side ? c.lower : c.upper;
          if (from != a || component[static_cast<std::size_t>(to)]) continue;
          const double delta = p.mode_detuning.at(c.mode);
          theta[static_cast<std::size_t>(to)] = theta[static_cast<std::size_t>(a)] + (side ? -delta : delta);
          component[static_cast<std::size_t>(to)] = root;
          stack.push_back(to);
        }
      }
    }
  }
  std::vector<std::vector<cplx>> h(static_cast<std::size_t>(n + 1), std::vector<cplx>(static_cast<std::size_t>(n + 1)));
  std::vector<std::vector<cplx>> rho = h;
  for (const auto& c : d.couplings) {
    const double om = p.rabi.at(c.pair());
    h[c.upper][c.lower] = om;
    h[c.lower][c.upper] = om;
  }
  for (int i = 1; i <= n; ++i) {
    rho[i][i] = x.population(i);
    for (int j = 1; j <= n; ++j)
      if (i != j) rho[i][j] = x.coherence(i, j);
  }
  std::vector<double> out_rate(static_cast<std::size_t>(n + 1), 0.0);
  for (const auto& c : d.decays) out_rate[static_cast<std::size_t>(c.upper)] += p.decay.at(c.channel());
  StateVector out(n);
  const cplx I(0.0, 1.0);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      cplx v = 0.0;
      for (int k = 1; k <= n; ++k) v += -I * (h[i][k] * rho[k][j] - rho[i][k] * h[k][j]);
      if (i == j) {
        v -= out_rate[static_cast<std::size_t>(i)] * rho[i][i];
        for (const auto& c : d.decays)
          if (c.lower == i) v += p.decay.at(c.channel()) * rho[c.upper][c.upper];
        out.set_population(i, v.real());
      } else {
        auto g = p.gamma.find({i, j});
        const double gamma = g != p.gamma.end() ? g->second
                                                : 0.5 * (out_rate[static_cast<std::size_t>(i)] + out_rate[static_cast<std::size_t>(j)]);
        v -= gamma * rho[i][j];
        if (component[static_cast<std::size_t>(i)] == component[static_cast<std::size_t>(j)])
          v -= I * (theta[static_cast<std::size_t>(j)] - theta[static_cast<std::size_t>(i)]) * rho[i][j];
        out.set_coherence(i, j, v);
      }
    }
  }
  return out;
}

inline std::filesystem::path scratch_dir() {
  std::filesystem::path dir = BLOCHGEN_SCRATCH_DIR;
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Compiles C source with the configured compiler and returns its stdout.
/// Empty optional-like result signalled by `ok == false`.
struct RunResult {
  bool ok = false;
  std::string output;
  std::string diagnostics;
};

inline RunResult compile_and_run(const std::string& source, const std::string& name) {
  const auto dir = scratch_dir();
  const auto src = dir / (name + ".c");
  const auto exe = dir / name;
  const auto log = dir / (name + ".log");
  const auto out = dir / (name + ".out");
  std::ofstream(src, std::ios::binary) << source;
  const std::string cc = std::string(BLOCHGEN_C_COMPILER) + " -std=c99 -O2 -ffp-contract=off -o '" + exe.string() + "' '" +
                         src.string() + "' -lm > '" + log.string() + "' 2>&1";
  RunResult r;
  if (std::system(cc.c_str()) != 0) {
    r.diagnostics = read_file(log);
    return r;
  }
  const std::string run = "'" + exe.string() + "' > '" + out.string() + "'";
  if (std::system(run.c_str()) != 0) {
    r.diagnostics = "program exited with an error";
    return r;
  }
  r.ok = true;
  r.output = read_file(out);
  return r;
}

}  // namespace testing
