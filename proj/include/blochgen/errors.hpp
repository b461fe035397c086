#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace blochgen {

/// Malformed or unreadable configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A diagram was refused because validate() reported violations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// No rotating frame exists: two coupling paths between the same pair of
/// levels accumulate different mode detunings.
class LoopInconsistencyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A symbol referenced by the Bloch system has no numeric binding.
class UnboundHandleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite state.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long long step, double detuning_mhz = 0.0, bool in_sweep = false)
      : std::runtime_error(what), step_(step), detuning_mhz_(detuning_mhz), in_sweep_(in_sweep) {}
  long long step() const noexcept { return step_; }
  double detuning_mhz() const noexcept { return detuning_mhz_; }
  bool in_sweep() const noexcept { return in_sweep_; }

 private:
  long long step_;
  double detuning_mhz_;
  bool in_sweep_;
};

/// Request the code generator cannot honor (e.g. sweeping an undriven mode).
class CodegenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blochgen
