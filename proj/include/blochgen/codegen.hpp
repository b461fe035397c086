#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blochgen/dynamics.hpp"
#include "blochgen/level_model.hpp"
#include "blochgen/liouvillian.hpp"
#include "blochgen/parameters.hpp"
#include "blochgen/state.hpp"

namespace blochgen {

enum class CodegenMode { Temporal, Detuning };

struct CodegenRequest {
  const BlochSystem* system = nullptr;
  const LevelDiagram* diagram = nullptr;
  const ParameterSet* params = nullptr;
  CodegenMode mode = CodegenMode::Temporal;
  SolverConfig solver;
  std::optional<SweepConfig> sweep;
  std::optional<StateVector> initial;  // default_initial_state otherwise
  std::vector<ElementId> observables;
};

/// Adjustable symbol of the emitted program, grouped like the five
/// "Adjustments" sections of the generated file.
struct ManifestEntry {
  std::string symbol;
  int group = 0;  // 1 integration, 2 Rabi, 3 decays, 4 initial state, 5 detunings
  int line = 0;   // 1-based line in the emitted text
};

struct EmittedSource {
  std::string text;
  std::vector<ManifestEntry> manifest;
};

/// Standalone C99 solver for the request. Throws CodegenError for requests
/// it cannot honor.
EmittedSource emit(const CodegenRequest& request);

/// Variable names used in emitted code ("A12", "Gamma81", "Gamma12_5", ...).
/// Indices are separated by '_' only when one of them has two digits.
std::string rabi_symbol(LevelPair pair);
std::string decay_symbol(Channel channel);
std::string gamma_symbol(LevelPair pair);
std::string delta_symbol(LevelPair pair);  // upper index first: delta21

/// Whitespace-separated numeric table; '#' lines are skipped.
using Table = std::vector<std::vector<double>>;
Table parse_table(const std::string& text);

struct EquivalenceReport {
  double max_abs_diff = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
};

/// Runs the native engine on the same request and compares every printed
/// value. Throws std::invalid_argument on a shape mismatch.
EquivalenceReport equivalence_check(const CodegenRequest& request, const Table& compiled_output);

/// The table the emitted program is expected to print, computed natively.
Table native_table(const CodegenRequest& request);

}  // namespace blochgen
