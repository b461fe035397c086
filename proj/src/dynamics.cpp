#include "blochgen/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "blochgen/errors.hpp"
#include "blochgen/units.hpp"

namespace blochgen {

NumericGenerator::NumericGenerator(int n_levels, std::vector<std::size_t> row_ptr, std::vector<std::uint32_t> cols,
                                   std::vector<double> coeffs)
    : n_(n_levels), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), coeffs_(std::move(coeffs)) {}

void NumericGenerator::apply(std::span<const double> y, std::span<double> dy) const {
  const std::size_t rows = dimension();
  const std::size_t* rp = row_ptr_.data();
  const std::uint32_t* col = cols_.data();
  const double* c = coeffs_.data();
  const double* yv = y.data();
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t k = rp[r];
    const std::size_t end = rp[r + 1];
    if (k == end) {
      dy[r] = 0.0;
      continue;
    }
    double acc = c[k] * yv[col[k]];
    for (++k; k < end; ++k) acc = acc + c[k] * yv[col[k]];
    dy[r] = acc;
  }
}

double NumericGenerator::coefficient(std::size_t row, std::size_t col) const {
  for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (cols_[k] == col) return coeffs_[k];
  return 0.0;
}

NumericGenerator compile(const RealSystem& real, const ResolvedParameters& values) {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> coeffs;
  cols.reserve(real.nonzeros());
  coeffs.reserve(real.nonzeros());
  for (const auto& row : real.rows) {
    for (const auto& e : row) {
      cols.push_back(static_cast<std::uint32_t>(e.col));
      coeffs.push_back(evaluate(e, values));
    }
    row_ptr.push_back(cols.size());
  }
  return NumericGenerator(real.n_levels, std::move(row_ptr), std::move(cols), std::move(coeffs));
}

NumericGenerator compile(const BlochSystem& system, const ParameterSet& params) {
  return compile(expand(system), resolve(system, params));
}

double residual(const NumericGenerator& gen, const StateVector& state) {
  std::vector<double> dy(gen.dimension());
  gen.apply(state.values(), dy);
  double m = 0.0;
  for (double v : dy) m = std::max(m, std::abs(v));
  return m;
}

long long SolverConfig::steps() const { return std::llround(t_total / h); }

void SolverConfig::check() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("solver: h must be positive");
  if (!(t_total >= h) || !std::isfinite(t_total)) throw std::invalid_argument("solver: t_total must be >= h");
  if (stride < 1) throw std::invalid_argument("solver: stride must be >= 1");
}

namespace {

/// Classical RK4 state; the arithmetic order here is mirrored by the
/// emitted C kernel.
class Rk4 {
 public:
  Rk4(const NumericGenerator& gen, double h)
      : gen_(gen), n_(gen.dimension()), h_(h), hh_(0.5 * h), h6_(h / 6.0), k1_(n_), k2_(n_), k3_(n_), k4_(n_), yt_(n_) {}

  void step(std::vector<double>& y) {
    const std::size_t n = n_;
    double* yv = y.data();
    double* yt = yt_.data();
    double *k1 = k1_.data(), *k2 = k2_.data(), *k3 = k3_.data(), *k4 = k4_.data();
    gen_.apply(y, k1_);
    for (std::size_t i = 0; i < n; ++i) yt[i] = yv[i] + hh_ * k1[i];
    gen_.apply(yt_, k2_);
    for (std::size_t i = 0; i < n; ++i) yt[i] = yv[i] + hh_ * k2[i];
    gen_.apply(yt_, k3_);
    for (std::size_t i = 0; i < n; ++i) yt[i] = yv[i] + h_ * k3[i];
    gen_.apply(yt_, k4_);
    for (std::size_t i = 0; i < n; ++i) yv[i] = yv[i] + h6_ * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

 private:
  const NumericGenerator& gen_;
  std::size_t n_;
  double h_, hh_, h6_;
  std::vector<double> k1_, k2_, k3_, k4_, yt_;
};

bool all_finite(const std::vector<double>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

void check_shape(const NumericGenerator& gen, const StateVector& init) {
  if (init.size() != gen.dimension()) throw std::invalid_argument("initial state dimension does not match the system");
}

}  // namespace

Trajectory integrate(const NumericGenerator& gen, const StateVector& init, const SolverConfig& cfg) {
  cfg.check();
  check_shape(gen, init);
  const long long steps = cfg.steps();
  std::vector<double> y(init.values().begin(), init.values().end());
  if (!all_finite(y)) throw SolverError("non-finite initial state", 0);
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps / cfg.stride + 1));
  traj.states.reserve(static_cast<std::size_t>(steps / cfg.stride + 1));
  traj.times.push_back(0.0);
  traj.states.push_back(init);
  Rk4 rk(gen, cfg.h);
  for (long long s = 1; s <= steps; ++s) {
    rk.step(y);
    if (s % cfg.stride == 0) {
      if (!all_finite(y)) throw SolverError("non-finite state at step " + std::to_string(s), s);
      traj.times.push_back(static_cast<double>(s) * cfg.h);
      traj.states.emplace_back(init.n_levels(), y);
    }
  }
  if (!all_finite(y)) throw SolverError("non-finite state at step " + std::to_string(steps), steps);
  return traj;
}

Trajectory evolve(const NumericGenerator& gen, const StateVector& init, const SolverConfig& cfg) {
  if (std::abs(init.trace() - 1.0) > 1e-12) throw std::invalid_argument("initial populations must sum to 1");
  return integrate(gen, init, cfg);
}

StateVector integrate_final(const NumericGenerator& gen, const StateVector& init, double t_total, double h) {
  SolverConfig cfg{t_total, h, 1};
  cfg.check();
  check_shape(gen, init);
  const long long steps = cfg.steps();
  std::vector<double> y(init.values().begin(), init.values().end());
  Rk4 rk(gen, h);
  // Finite-ness is checked in blocks to keep the inner loop tight.
  constexpr long long kCheckEvery = 4096;
  for (long long s = 1; s <= steps; ++s) {
    rk.step(y);
    if ((s % kCheckEvery == 0 || s == steps) && !all_finite(y))
      throw SolverError("non-finite state at step " + std::to_string(s), s);
  }
  return StateVector(init.n_levels(), std::move(y));
}

long SweepConfig::grid_half_width() const { return std::lround(width_mhz / (2.0 * step_mhz)); }

void SweepConfig::check() const {
  if (!(step_mhz > 0.0)) throw std::invalid_argument("sweep: step_mhz must be positive");
  if (!(width_mhz >= step_mhz)) throw std::invalid_argument("sweep: width_mhz must be >= step_mhz");
  SolverConfig{t_interaction, h, 1}.check();
}

double sweep_detuning(const SweepConfig& cfg, long d) { return 2.0 * kPi * cfg.step_mhz * static_cast<double>(d) * 1e6; }

Spectrum sweep(const BlochSystem& system, const ParameterSet& params, const LevelDiagram& diagram,
               const SweepConfig& cfg, const SweepOptions& options) {
  cfg.check();
  if (!diagram.find_mode(cfg.swept_mode)) throw std::invalid_argument("sweep: unknown mode " + std::to_string(cfg.swept_mode));
  const StateVector init = options.initial ? *options.initial : default_initial_state(diagram);
  const RealSystem real = expand(system);
  // Resolve once up front so unbound handles fail before any work starts.
  (void)resolve(system, params);

  const long half = cfg.grid_half_width();
  const std::size_t count = static_cast<std::size_t>(2 * half + 1);
  Spectrum out;
  out.detunings_mhz.resize(count);
  out.final_states.resize(count);

  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::vector<std::exception_ptr> errors(workers);

  auto run_range = [&](unsigned w, std::size_t begin, std::size_t end) {
    try {
      ParameterSet local = params;
      for (std::size_t k = begin; k < end; ++k) {
        const long d = static_cast<long>(k) - half;
        local.mode_detuning[cfg.swept_mode] = sweep_detuning(cfg, d);
        const auto gen = compile(real, resolve(system, local));
        out.detunings_mhz[k] = cfg.step_mhz * static_cast<double>(d);
        try {
          out.final_states[k] = integrate_final(gen, init, cfg.t_interaction, cfg.h);
        } catch (const SolverError& e) {
          throw SolverError(std::string(e.what()) + " at detuning " + std::to_string(out.detunings_mhz[k]) + " MHz",
                            e.step(), out.detunings_mhz[k], true);
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  // Static contiguous partition; each slot is written by exactly one worker.
  const std::size_t chunk = count / workers;
  const std::size_t extra = count % workers;
  std::vector<std::thread> threads;
  std::size_t begin = 0;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t len = chunk + (w < extra ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(run_range, w, ranges[w].first, ranges[w].second);
  run_range(0, ranges[0].first, ranges[0].second);
  for (auto& t : threads) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace {

double max_trace_error(const std::vector<StateVector>& states) {
  double m = 0.0;
  for (const auto& s : states) m = std::max(m, std::abs(s.trace() - 1.0));
  return m;
}

}  // namespace

double trace_error(const Trajectory& traj) { return max_trace_error(traj.states); }
double trace_error(const Spectrum& spectrum) { return max_trace_error(spectrum.final_states); }

}  // namespace blochgen
