#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blochgen/level_model.hpp"

namespace blochgen {

/// Formal signed sum of mode detunings, mode id -> integer coefficient.
class ModeSum {
 public:
  ModeSum() = default;
  static ModeSum of(int mode, int sign);

  ModeSum operator+(const ModeSum& other) const;
  ModeSum operator-(const ModeSum& other) const;
  ModeSum scaled(int factor) const;
  bool empty() const { return coeffs_.empty(); }
  const std::map<int, int>& coefficients() const { return coeffs_; }
  bool operator==(const ModeSum&) const = default;

  std::string str() const;

 private:
  std::map<int, int> coeffs_;
};

/// A driven pair's detuning in terms of its mode.
/// For pair (lo, hi) the pair detuning is theta_hi - theta_lo, where theta is
/// the rotating-frame energy shift accumulated along absorption steps.
struct DrivenPair {
  int mode = 0;
  int sign = 1;  // +1 when hi is the upper level of the coupling
};

struct DetuningStep {
  LevelPair pair;  // a driven pair
  int sign = 1;
};

struct PairDetuning {
  bool connected = false;
  bool driven = false;
  ModeSum formal;
  /// Breadth-first shortest path from lo to hi as signed driven-pair steps;
  /// single step for driven pairs, empty when disconnected.
  std::vector<DetuningStep> path;
};

struct LoopInconsistency {
  std::vector<int> loop;  // closed level sequence, first == last
  std::string message;
};

struct DetuningMap {
  std::map<LevelPair, DrivenPair> driven;
  std::map<LevelPair, PairDetuning> pairs;  // every unordered pair
  std::optional<LoopInconsistency> inconsistency;
};

/// Assumes indices and modes are already valid. A loop inconsistency is
/// reported in the result rather than thrown.
DetuningMap detuning_map(const LevelDiagram& diagram);

}  // namespace blochgen
