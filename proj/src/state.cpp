#include "blochgen/state.hpp"

#include <stdexcept>

namespace blochgen {

std::vector<ElementId> StateLayout::elements() const {
  std::vector<ElementId> out;
  out.reserve(element_count());
  for (int i = 1; i <= n_; ++i) out.push_back({i, i});
  for (int i = 1; i <= n_; ++i)
    for (int j = i + 1; j <= n_; ++j) out.push_back({i, j});
  return out;
}

StateVector::StateVector(int n_levels, std::vector<double> values) : n_(n_levels), values_(std::move(values)) {
  if (values_.size() != StateLayout(n_).dimension())
    throw std::invalid_argument("state vector length does not match N^2");
}

std::complex<double> StateVector::coherence(int i, int j) const {
  const auto l = layout();
  if (i < j) return {values_[l.re_slot(i, j)], values_[l.im_slot(i, j)]};
  if (i > j) return {values_[l.re_slot(j, i)], -values_[l.im_slot(j, i)]};
  return {population(i), 0.0};
}

void StateVector::set_coherence(int i, int j, std::complex<double> value) {
  const auto l = layout();
  if (i == j) throw std::invalid_argument("set_coherence needs i != j");
  if (i > j) {
    std::swap(i, j);
    value = std::conj(value);
  }
  values_[l.re_slot(i, j)] = value.real();
  values_[l.im_slot(i, j)] = value.imag();
}

double StateVector::trace() const {
  double t = 0.0;
  for (int i = 1; i <= n_; ++i) t += population(i);
  return t;
}

StateVector default_initial_state(const LevelDiagram& diagram) {
  StateVector s(diagram.size());
  auto stable = stable_levels(diagram);
  if (stable.empty())
    for (int i = 1; i <= diagram.size(); ++i) stable.push_back(i);
  const double p = 1.0 / static_cast<double>(stable.size());
  for (int i : stable) s.set_population(i, p);
  return s;
}

}  // namespace blochgen
