#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace blochgen {

inline constexpr int kMinLevels = 2;
inline constexpr int kMaxLevels = 30;

/// Unordered pair of level indices, stored with lo < hi.
struct LevelPair {
  int lo = 0;
  int hi = 0;

  static LevelPair of(int a, int b) { return a < b ? LevelPair{a, b} : LevelPair{b, a}; }
  auto operator<=>(const LevelPair&) const = default;
};

/// Ordered decay channel: population flows from `from` to `to`.
struct Channel {
  int from = 0;
  int to = 0;
  auto operator<=>(const Channel&) const = default;
};

struct Level {
  int index = 0;
  double energy = 0.0;  // relative; used for ordering and display only
  std::string label;
  std::optional<int> m_f;
};

struct FieldMode {
  int id = 0;
  std::string name;
};

/// A dipole-allowed transition driven by one field mode.
struct Coupling {
  int upper = 0;
  int lower = 0;
  int mode = 0;

  LevelPair pair() const { return LevelPair::of(upper, lower); }
};

struct DecayChannel {
  int upper = 0;
  int lower = 0;

  Channel channel() const { return {upper, lower}; }
};

struct LevelDiagram {
  std::vector<Level> levels;
  std::vector<FieldMode> modes;
  std::vector<Coupling> couplings;
  std::vector<DecayChannel> decays;

  int size() const { return static_cast<int>(levels.size()); }
  const Level* find_level(int index) const;
  const FieldMode* find_mode(int id) const;
  /// Outgoing decay channels of `level`, ordered by target index.
  std::vector<Channel> channels_from(int level) const;
  /// Incoming decay channels of `level`, ordered by source index.
  std::vector<Channel> channels_into(int level) const;
  /// Levels coupled to `level` by a field mode, ascending.
  std::vector<int> neighbors(int level) const;
  const Coupling* find_coupling(LevelPair pair) const;
};

enum class ViolationKind {
  LevelCount,
  LevelIndex,
  UnknownLevel,
  DuplicateMode,
  UnknownMode,
  UnusedMode,
  SelfCoupling,
  CouplingOrientation,
  DuplicateCoupling,
  SelfDecay,
  UpwardDecay,
  DuplicateDecay,
  LoopInconsistency,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::vector<std::string> messages() const;
};

/// Checks every structural constraint on the diagram, including rotating-frame
/// loop consistency. Never throws.
ValidationReport validate(const LevelDiagram& diagram);

/// Throws ValidationError (or LoopInconsistencyError) if validate() fails.
void require_valid(const LevelDiagram& diagram);

/// Coherence relaxation rate of one pair as a sum over decay channels.
/// Its value is 0.5 * (sum of the listed channel rates), zero when empty.
struct GammaExpression {
  std::vector<Channel> channels;
};

/// For every unordered pair, the channels leaving either state.
std::map<LevelPair, GammaExpression> derived_gammas(const LevelDiagram& diagram);

/// Each decaying state's channels get `total_rate / channel_count`.
std::map<Channel, double> default_branching(const LevelDiagram& diagram, double total_rate);

/// Levels with no outgoing decay channel.
std::vector<int> stable_levels(const LevelDiagram& diagram);

}  // namespace blochgen
