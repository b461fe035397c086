#include "blochgen/level_model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "blochgen/detuning.hpp"
#include "blochgen/errors.hpp"

namespace blochgen {

ValidationError::ValidationError(std::vector<std::string> messages)
    : std::runtime_error(messages.empty() ? std::string("invalid diagram") : messages.front()),
      messages_(std::move(messages)) {}

const Level* LevelDiagram::find_level(int index) const {
  auto it = std::find_if(levels.begin(), levels.end(), [&](const Level& l) { return l.index == index; });
  return it == levels.end() ? nullptr : &*it;
}

const FieldMode* LevelDiagram::find_mode(int id) const {
  auto it = std::find_if(modes.begin(), modes.end(), [&](const FieldMode& m) { return m.id == id; });
  return it == modes.end() ? nullptr : &*it;
}

std::vector<Channel> LevelDiagram::channels_from(int level) const {
  std::vector<Channel> out;
  for (const auto& d : decays)
    if (d.upper == level) out.push_back(d.channel());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Channel> LevelDiagram::channels_into(int level) const {
  std::vector<Channel> out;
  for (const auto& d : decays)
    if (d.lower == level) out.push_back(d.channel());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> LevelDiagram::neighbors(int level) const {
  std::vector<int> out;
  for (const auto& c : couplings) {
    if (c.upper == level) out.push_back(c.lower);
    if (c.lower == level) out.push_back(c.upper);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const Coupling* LevelDiagram::find_coupling(LevelPair pair) const {
  auto it = std::find_if(couplings.begin(), couplings.end(), [&](const Coupling& c) { return c.pair() == pair; });
  return it == couplings.end() ? nullptr : &*it;
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::vector<std::string> ValidationReport::messages() const {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(v.message);
  return out;
}

ValidationReport validate(const LevelDiagram& diagram) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, const std::string& msg) { report.violations.push_back({kind, msg}); };

  const int n = diagram.size();
  if (n < kMinLevels || n > kMaxLevels) {
    std::ostringstream os;
    os << "level count: N = " << n << " is outside " << kMinLevels << " <= N <= " << kMaxLevels;
    add(ViolationKind::LevelCount, os.str());
  }

  std::set<int> indices;
  for (const auto& l : diagram.levels) {
    if (!indices.insert(l.index).second) add(ViolationKind::LevelIndex, "level index: duplicate index " + std::to_string(l.index));
    if (l.index < 1 || l.index > n)
      add(ViolationKind::LevelIndex, "level index: " + std::to_string(l.index) + " is outside 1.." + std::to_string(n));
  }

  std::set<int> mode_ids;
  for (const auto& m : diagram.modes)
    if (!mode_ids.insert(m.id).second) add(ViolationKind::DuplicateMode, "duplicate mode: id " + std::to_string(m.id));

  auto level_ok = [&](int idx, const std::string& what) {
    if (diagram.find_level(idx)) return true;
    add(ViolationKind::UnknownLevel, "unknown level: " + what + " references level " + std::to_string(idx));
    return false;
  };
  auto pair_text = [](int u, int l) { return std::to_string(u) + "->" + std::to_string(l); };

  bool structure_ok = report.ok();
  std::set<LevelPair> coupled;
  std::set<int> used_modes;
  for (const auto& c : diagram.couplings) {
    const std::string what = "coupling " + pair_text(c.upper, c.lower);
    bool ok = level_ok(c.upper, what);
    ok = level_ok(c.lower, what) && ok;
    if (!diagram.find_mode(c.mode)) {
      add(ViolationKind::UnknownMode, "unknown mode: " + what + " uses mode " + std::to_string(c.mode));
      ok = false;
    }
    used_modes.insert(c.mode);
    if (c.upper == c.lower) {
      add(ViolationKind::SelfCoupling, "self coupling: " + what);
      ok = false;
    }
    if (ok && diagram.find_level(c.upper)->energy <= diagram.find_level(c.lower)->energy)
      add(ViolationKind::CouplingOrientation,
          "coupling orientation: upper level " + std::to_string(c.upper) + " is not above level " + std::to_string(c.lower));
    if (c.upper != c.lower && !coupled.insert(c.pair()).second)
      add(ViolationKind::DuplicateCoupling, "duplicate coupling: levels " + std::to_string(c.pair().lo) + " and " +
                                                std::to_string(c.pair().hi) +
                                                " (a single field mode drives each transition)");
    structure_ok = structure_ok && ok;
  }

  for (const auto& m : diagram.modes)
    if (!used_modes.count(m.id)) add(ViolationKind::UnusedMode, "unused mode: mode " + std::to_string(m.id) + " drives no coupling");

  std::set<Channel> channels;
  for (const auto& d : diagram.decays) {
    const std::string what = "decay " + pair_text(d.upper, d.lower);
    bool ok = level_ok(d.upper, what);
    ok = level_ok(d.lower, what) && ok;
    if (d.upper == d.lower) {
      add(ViolationKind::SelfDecay, "self decay: " + what);
      ok = false;
    }
    if (ok && diagram.find_level(d.upper)->energy <= diagram.find_level(d.lower)->energy)
      add(ViolationKind::UpwardDecay, "upward decay: " + what + " does not go down in energy");
    if (!channels.insert(d.channel()).second) add(ViolationKind::DuplicateDecay, "duplicate decay: " + what);
  }

  // The frame check needs every coupling to reference real levels and modes.
  if (structure_ok && !report.has(ViolationKind::DuplicateMode) && !report.has(ViolationKind::LevelIndex)) {
    const auto map = detuning_map(diagram);
    if (map.inconsistency) add(ViolationKind::LoopInconsistency, "loop inconsistency: " + map.inconsistency->message);
  }
  return report;
}

void require_valid(const LevelDiagram& diagram) {
  const auto report = validate(diagram);
  if (report.ok()) return;
  if (report.has(ViolationKind::LoopInconsistency)) throw LoopInconsistencyError(report.messages());
  throw ValidationError(report.messages());
}

std::map<LevelPair, GammaExpression> derived_gammas(const LevelDiagram& diagram) {
  std::map<LevelPair, GammaExpression> out;
  const int n = diagram.size();
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      GammaExpression g;
      for (const auto& ch : diagram.channels_from(i)) g.channels.push_back(ch);
      for (const auto& ch : diagram.channels_from(j)) g.channels.push_back(ch);
      out.emplace(LevelPair{i, j}, std::move(g));
    }
  }
  return out;
}

std::map<Channel, double> default_branching(const LevelDiagram& diagram, double total_rate) {
  std::map<Channel, double> out;
  for (const auto& level : diagram.levels) {
    const auto chans = diagram.channels_from(level.index);
    for (const auto& ch : chans) out[ch] = total_rate / static_cast<double>(chans.size());
  }
  return out;
}

std::vector<int> stable_levels(const LevelDiagram& diagram) {
  std::vector<int> out;
  for (int i = 1; i <= diagram.size(); ++i)
    if (diagram.channels_from(i).empty()) out.push_back(i);
  return out;
}

}  // namespace blochgen
