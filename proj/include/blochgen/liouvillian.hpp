#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blochgen/detuning.hpp"
#include "blochgen/level_model.hpp"
#include "blochgen/state.hpp"

namespace blochgen {

enum class TermKind {
  RabiDrive,           // reads rabi[pair]
  Detuning,            // reads the pair detuning of `pair` (theta_hi - theta_lo)
  CoherenceDecay,      // reads gamma[pair]
  PopulationDecayOut,  // reads decay[channel]
  PopulationDecayIn,   // reads decay[channel]
};

/// One linear contribution  scalar * parameter * source  to d(target)/dt.
/// `scalar` is a structural unit factor (+-1 or +-i).
struct Term {
  ElementId target;
  ElementId source;
  bool conjugate_source = false;
  TermKind kind = TermKind::RabiDrive;
  LevelPair pair{};
  Channel channel{};
  std::complex<double> scalar{1.0, 0.0};

  bool operator==(const Term&) const = default;
};

/// The RWA optical Bloch equations of a diagram as a sparse term list,
/// grouped by target element in canonical order.
class BlochSystem {
 public:
  BlochSystem(int n_levels, std::vector<Term> terms, std::vector<std::size_t> row_begin, DetuningMap detunings,
              std::map<LevelPair, GammaExpression> gammas);

  int n_levels() const { return n_; }
  StateLayout layout() const { return StateLayout(n_); }
  std::size_t equation_count() const { return row_begin_.size() - 1; }
  std::span<const Term> terms() const { return terms_; }
  /// Terms of the equation for the element at canonical position `row`.
  std::span<const Term> row(std::size_t row) const;
  std::span<const Term> row(ElementId e) const { return row(layout().element_index(e)); }
  const DetuningMap& detunings() const { return detunings_; }
  const std::map<LevelPair, GammaExpression>& gammas() const { return gammas_; }

 private:
  int n_;
  std::vector<Term> terms_;
  std::vector<std::size_t> row_begin_;
  DetuningMap detunings_;
  std::map<LevelPair, GammaExpression> gammas_;
};

/// Builds the Bloch equations. Throws ValidationError or
/// LoopInconsistencyError for invalid diagrams.
BlochSystem generate(const LevelDiagram& diagram);

/// n(n+1)/2; throws std::out_of_range unless 2 <= n <= 30.
int equation_count(int n);

enum class RenderFormat { Plain, Latex };

/// One line per independent element, newline-terminated, deterministic.
std::string render(const BlochSystem& system, RenderFormat format);

/// Real-part contribution of every term whose target is a population,
/// collected per (parameter, real source slot). Empty iff the population
/// right-hand sides sum to zero identically.
struct SymbolicCoefficient {
  TermKind kind;
  LevelPair pair;
  Channel channel;
  std::size_t slot;
  double value;
};
std::vector<SymbolicCoefficient> population_sum(const BlochSystem& system);

}  // namespace blochgen
