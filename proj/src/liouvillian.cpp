#include "blochgen/liouvillian.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace blochgen {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

struct SourceRef {
  ElementId element;
  bool conjugate;
};

// rho_ab expressed through the independent elements.
SourceRef element_of(int a, int b) {
  if (a <= b) return {{a, b}, false};
  return {{b, a}, true};
}

}  // namespace

BlochSystem::BlochSystem(int n_levels, std::vector<Term> terms, std::vector<std::size_t> row_begin,
                         DetuningMap detunings, std::map<LevelPair, GammaExpression> gammas)
    : n_(n_levels),
      terms_(std::move(terms)),
      row_begin_(std::move(row_begin)),
      detunings_(std::move(detunings)),
      gammas_(std::move(gammas)) {}

std::span<const Term> BlochSystem::row(std::size_t r) const {
  if (r + 1 >= row_begin_.size()) throw std::out_of_range("row index");
  return std::span<const Term>(terms_).subspan(row_begin_[r], row_begin_[r + 1] - row_begin_[r]);
}

BlochSystem generate(const LevelDiagram& diagram) {
  require_valid(diagram);
  const int n = diagram.size();
  const StateLayout layout(n);
  DetuningMap detunings = detuning_map(diagram);

  std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n) + 1);
  for (int k = 1; k <= n; ++k) neighbors[static_cast<std::size_t>(k)] = diagram.neighbors(k);

  std::vector<Term> terms;
  std::vector<std::size_t> row_begin;
  for (const ElementId e : layout.elements()) {
    row_begin.push_back(terms.size());

    // -i [H_int, rho]_ij with H_int = sum over couplings of Omega (|l><u| + |u><l|).
    std::vector<Term> drive;
    for (int k : neighbors[static_cast<std::size_t>(e.i)]) {
      const auto src = element_of(k, e.j);
      drive.push_back({e, src.element, src.conjugate, TermKind::RabiDrive, LevelPair::of(e.i, k), {}, -kI});
    }
    for (int k : neighbors[static_cast<std::size_t>(e.j)]) {
      const auto src = element_of(e.i, k);
      drive.push_back({e, src.element, src.conjugate, TermKind::RabiDrive, LevelPair::of(e.j, k), {}, kI});
    }
    std::stable_sort(drive.begin(), drive.end(), [&](const Term& a, const Term& b) {
      return std::tuple(layout.element_index(a.source), a.conjugate_source) <
             std::tuple(layout.element_index(b.source), b.conjugate_source);
    });
    terms.insert(terms.end(), drive.begin(), drive.end());

    if (e.is_population()) {
      for (const auto& ch : diagram.channels_from(e.i))
        terms.push_back({e, e, false, TermKind::PopulationDecayOut, {}, ch, {-1.0, 0.0}});
      for (const auto& ch : diagram.channels_into(e.i))
        terms.push_back({e, {ch.from, ch.from}, false, TermKind::PopulationDecayIn, {}, ch, {1.0, 0.0}});
    } else {
      const LevelPair p{e.i, e.j};
      // d sigma_ij/dt gets -i (theta_j - theta_i) sigma_ij from the rotating
      // frame; pairs no field path connects have no frame term.
      if (detunings.pairs.at(p).connected) terms.push_back({e, e, false, TermKind::Detuning, p, {}, -kI});
      terms.push_back({e, e, false, TermKind::CoherenceDecay, p, {}, {-1.0, 0.0}});
    }
  }
  row_begin.push_back(terms.size());
  return BlochSystem(n, std::move(terms), std::move(row_begin), std::move(detunings), derived_gammas(diagram));
}

int equation_count(int n) {
  if (n < kMinLevels || n > kMaxLevels) throw std::out_of_range("level count must satisfy 2 <= N <= 30");
  return n * (n + 1) / 2;
}

std::vector<SymbolicCoefficient> population_sum(const BlochSystem& system) {
  const auto layout = system.layout();
  std::map<std::tuple<int, int, int, std::size_t>, double> acc;
  for (const auto& t : system.terms()) {
    if (!t.target.is_population()) continue;
    int group = 0;
    int a = t.pair.lo, b = t.pair.hi;
    switch (t.kind) {
      case TermKind::RabiDrive: group = 0; break;
      case TermKind::PopulationDecayOut:
      case TermKind::PopulationDecayIn:
        group = 1;
        a = t.channel.from;
        b = t.channel.to;
        break;
      case TermKind::CoherenceDecay: group = 2; break;
      case TermKind::Detuning: group = 3; break;
    }
    // Real part of scalar * source.
    if (t.source.is_population()) {
      acc[{group, a, b, layout.population_slot(t.source.i)}] += t.scalar.real();
    } else {
      const double ysign = t.conjugate_source ? -1.0 : 1.0;
      acc[{group, a, b, layout.re_slot(t.source.i, t.source.j)}] += t.scalar.real();
      acc[{group, a, b, layout.im_slot(t.source.i, t.source.j)}] += -t.scalar.imag() * ysign;
    }
  }
  std::vector<SymbolicCoefficient> out;
  for (const auto& [key, v] : acc) {
    if (v == 0.0) continue;
    const auto [group, a, b, slot] = key;
    const TermKind kind = group == 0   ? TermKind::RabiDrive
                          : group == 1 ? TermKind::PopulationDecayOut
                          : group == 2 ? TermKind::CoherenceDecay
                                       : TermKind::Detuning;
    SymbolicCoefficient c{kind, {}, {}, slot, v};
    if (group == 1) c.channel = {a, b};
    else c.pair = {a, b};
    out.push_back(c);
  }
  return out;
}

}  // namespace blochgen
