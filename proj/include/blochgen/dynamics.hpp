#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blochgen/liouvillian.hpp"
#include "blochgen/parameters.hpp"
#include "blochgen/real_form.hpp"
#include "blochgen/state.hpp"

namespace blochgen {

/// Bound right-hand side f(y) = M y over the real state layout (CSR).
class NumericGenerator {
 public:
  NumericGenerator(int n_levels, std::vector<std::size_t> row_ptr, std::vector<std::uint32_t> cols,
                   std::vector<double> coeffs);

  int n_levels() const { return n_; }
  std::size_t dimension() const { return row_ptr_.size() - 1; }
  std::size_t nonzeros() const { return coeffs_.size(); }

  /// dy = M y. Each row sums its products left to right in column order.
  void apply(std::span<const double> y, std::span<double> dy) const;
  /// Matrix entry (0 if absent).
  double coefficient(std::size_t row, std::size_t col) const;

 private:
  int n_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> coeffs_;
};

NumericGenerator compile(const BlochSystem& system, const ParameterSet& params);
NumericGenerator compile(const RealSystem& real, const ResolvedParameters& values);

/// Infinity norm of f(state); a steady-state diagnostic.
double residual(const NumericGenerator& gen, const StateVector& state);

struct SolverConfig {
  double t_total = 1e-6;  // s
  double h = 5e-12;       // s
  long long stride = 100;

  long long steps() const;
  void check() const;  // throws std::invalid_argument
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
};

/// Fixed-step classical RK4 for round(t_total/h) steps, recording the
/// initial state and every stride-th state. Requires a normalized initial
/// state (populations sum to 1 within 1e-12). Throws SolverError on a
/// non-finite state.
Trajectory evolve(const NumericGenerator& gen, const StateVector& init, const SolverConfig& cfg);

/// Same integration without the normalization precondition (the equations
/// are linear, so arbitrary vectors are meaningful).
Trajectory integrate(const NumericGenerator& gen, const StateVector& init, const SolverConfig& cfg);

/// Final state only; no intermediate records.
StateVector integrate_final(const NumericGenerator& gen, const StateVector& init, double t_total, double h);

struct SweepConfig {
  double width_mhz = 200.0;
  double step_mhz = 1.0;
  int swept_mode = 1;
  double t_interaction = 1e-6;  // s
  double h = 5e-12;             // s

  /// Grid half-width K: indices run over -K..K.
  long grid_half_width() const;
  void check() const;
};

struct SweepOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
  std::optional<StateVector> initial;  // default_initial_state otherwise
};

struct Spectrum {
  std::vector<double> detunings_mhz;
  std::vector<StateVector> final_states;
};

/// Mode detuning used at grid index d: 2*Pi*step*d*1e6 rad/s.
double sweep_detuning(const SweepConfig& cfg, long d);

/// Integrates every grid point independently; results are ordered by grid
/// index and bitwise independent of the worker count.
Spectrum sweep(const BlochSystem& system, const ParameterSet& params, const LevelDiagram& diagram,
               const SweepConfig& cfg, const SweepOptions& options = {});

/// max |sum_i rho_ii - 1| over all recorded states.
double trace_error(const Trajectory& traj);
double trace_error(const Spectrum& spectrum);

}  // namespace blochgen
