#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "blochgen/level_model.hpp"

namespace blochgen {

/// Independent density-matrix element: a population when i == j, otherwise
/// the coherence sigma_ij with i < j (sigma_ji is its conjugate).
struct ElementId {
  int i = 0;
  int j = 0;

  bool is_population() const { return i == j; }
  auto operator<=>(const ElementId&) const = default;
};

/// Canonical real layout of an N-level state: N populations, then for each
/// pair (i<j) in row-major upper-triangle order the slots Re sigma_ij, Im sigma_ij.
/// Slot k here is pop[k+1] in emitted C code.
class StateLayout {
 public:
  explicit StateLayout(int n_levels) : n_(n_levels) {}

  int n_levels() const { return n_; }
  std::size_t dimension() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
  std::size_t element_count() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ + 1) / 2; }

  std::size_t population_slot(int i) const { return static_cast<std::size_t>(i - 1); }
  std::size_t pair_index(int i, int j) const {
    const auto a = static_cast<std::size_t>(i - 1);
    return a * static_cast<std::size_t>(n_) - a * (a + 1) / 2 + static_cast<std::size_t>(j - i - 1);
  }
  std::size_t re_slot(int i, int j) const { return static_cast<std::size_t>(n_) + 2 * pair_index(i, j); }
  std::size_t im_slot(int i, int j) const { return re_slot(i, j) + 1; }

  /// Position of an element in canonical order (populations first).
  std::size_t element_index(ElementId e) const {
    return e.is_population() ? population_slot(e.i) : static_cast<std::size_t>(n_) + pair_index(e.i, e.j);
  }
  /// All independent elements in canonical order.
  std::vector<ElementId> elements() const;

 private:
  int n_;
};

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int n_levels) : n_(n_levels), values_(StateLayout(n_levels).dimension(), 0.0) {}
  StateVector(int n_levels, std::vector<double> values);

  int n_levels() const { return n_; }
  StateLayout layout() const { return StateLayout(n_); }
  std::size_t size() const { return values_.size(); }

  double population(int i) const { return values_[layout().population_slot(i)]; }
  void set_population(int i, double p) { values_[layout().population_slot(i)] = p; }
  /// sigma_ij for any i != j (conjugated when i > j).
  std::complex<double> coherence(int i, int j) const;
  void set_coherence(int i, int j, std::complex<double> value);

  double trace() const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  bool operator==(const StateVector&) const = default;

 private:
  int n_ = 0;
  std::vector<double> values_;
};

/// Uniform population over stable levels (no outgoing decay), zero
/// coherences. Falls back to uniform over all levels if none is stable.
StateVector default_initial_state(const LevelDiagram& diagram);

}  // namespace blochgen
