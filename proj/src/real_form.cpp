#include "blochgen/real_form.hpp"

#include <string>

#include "blochgen/errors.hpp"

namespace blochgen {

std::size_t RealSystem::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

namespace {

ParamRef param_of(const Term& t) {
  switch (t.kind) {
    case TermKind::RabiDrive: return {ParamRef::Kind::Rabi, t.pair.lo, t.pair.hi};
    case TermKind::Detuning: return {ParamRef::Kind::Detuning, t.pair.lo, t.pair.hi};
    case TermKind::CoherenceDecay: return {ParamRef::Kind::Gamma, t.pair.lo, t.pair.hi};
    case TermKind::PopulationDecayOut:
    case TermKind::PopulationDecayIn: return {ParamRef::Kind::Decay, t.channel.from, t.channel.to};
  }
  return {};
}

std::string pair_text(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace

RealSystem expand(const BlochSystem& system) {
  const auto layout = system.layout();
  const std::size_t dim = layout.dimension();
  std::vector<std::map<std::size_t, std::vector<SignedParam>>> acc(dim);

  for (const Term& t : system.terms()) {
    const ParamRef ref = param_of(t);
    const int a = static_cast<int>(t.scalar.real());
    const int b = static_cast<int>(t.scalar.imag());
    auto add = [&](std::size_t row, std::size_t col, int sign) {
      if (sign != 0) acc[row][col].push_back({sign, ref});
    };
    const bool pop_target = t.target.is_population();
    const std::size_t re_row = pop_target ? layout.population_slot(t.target.i) : layout.re_slot(t.target.i, t.target.j);
    const std::size_t im_row = pop_target ? 0 : layout.im_slot(t.target.i, t.target.j);

    if (t.source.is_population()) {
      const std::size_t p = layout.population_slot(t.source.i);
      add(re_row, p, a);
      if (!pop_target) add(im_row, p, b);
    } else {
      const std::size_t x = layout.re_slot(t.source.i, t.source.j);
      const std::size_t y = layout.im_slot(t.source.i, t.source.j);
      const int conj = t.conjugate_source ? -1 : 1;
      // (a + ib)(x + i conj y) = (a x - b conj y) + i (b x + a conj y)
      add(re_row, x, a);
      add(re_row, y, -b * conj);
      if (!pop_target) {
        add(im_row, x, b);
        add(im_row, y, a * conj);
      }
    }
  }

  RealSystem out;
  out.n_levels = system.n_levels();
  out.rows.resize(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (auto& [col, expr] : acc[r]) out.rows[r].push_back({col, std::move(expr)});
  return out;
}

double ResolvedParameters::value(const ParamRef& ref) const {
  switch (ref.kind) {
    case ParamRef::Kind::Rabi: return rabi.at({ref.a, ref.b});
    case ParamRef::Kind::Decay: return decay.at({ref.a, ref.b});
    case ParamRef::Kind::Gamma: return gamma.at({ref.a, ref.b});
    case ParamRef::Kind::Detuning: return detuning.at({ref.a, ref.b});
  }
  return 0.0;
}

ResolvedParameters resolve(const BlochSystem& system, const ParameterSet& params) {
  ResolvedParameters out;
  const auto& dm = system.detunings();

  for (const auto& [pair, driven] : dm.driven) {
    auto it = params.rabi.find(pair);
    if (it == params.rabi.end()) throw UnboundHandleError("unbound Rabi frequency for pair " + pair_text(pair.lo, pair.hi));
    out.rabi[pair] = it->second;
  }

  auto decay_value = [&](const Channel& ch) {
    auto it = params.decay.find(ch);
    if (it == params.decay.end())
      throw UnboundHandleError("unbound decay rate for channel " + std::to_string(ch.from) + "->" + std::to_string(ch.to));
    return it->second;
  };
  for (const Term& t : system.terms())
    if (t.kind == TermKind::PopulationDecayOut || t.kind == TermKind::PopulationDecayIn)
      out.decay[t.channel] = decay_value(t.channel);

  for (const auto& [pair, expr] : system.gammas()) {
    if (auto it = params.gamma.find(pair); it != params.gamma.end()) {
      out.gamma[pair] = it->second;
      continue;
    }
    double g = 0.0;
    if (!expr.channels.empty()) {
      double s = decay_value(expr.channels.front());
      for (std::size_t k = 1; k < expr.channels.size(); ++k) s = s + decay_value(expr.channels[k]);
      g = 0.5 * s;
    }
    out.gamma[pair] = g;
  }

  for (const auto& [pair, driven] : dm.driven) {
    auto it = params.mode_detuning.find(driven.mode);
    if (it == params.mode_detuning.end()) throw UnboundHandleError("unbound detuning for mode " + std::to_string(driven.mode));
    out.detuning[pair] = driven.sign > 0 ? it->second : -it->second;
  }
  for (const auto& [pair, pd] : dm.pairs) {
    if (!pd.connected || pd.driven) continue;
    const auto& first = pd.path.front();
    double v = first.sign > 0 ? out.detuning.at(first.pair) : -out.detuning.at(first.pair);
    for (std::size_t k = 1; k < pd.path.size(); ++k) {
      const auto& s = pd.path[k];
      v = s.sign > 0 ? v + out.detuning.at(s.pair) : v - out.detuning.at(s.pair);
    }
    out.detuning[pair] = v;
  }
  return out;
}

double evaluate(const RealEntry& entry, const ResolvedParameters& values) {
  const auto& first = entry.expr.front();
  double v = first.sign > 0 ? values.value(first.ref) : -values.value(first.ref);
  for (std::size_t k = 1; k < entry.expr.size(); ++k) {
    const auto& s = entry.expr[k];
    v = s.sign > 0 ? v + values.value(s.ref) : v - values.value(s.ref);
  }
  return v;
}

}  // namespace blochgen
