#pragma once

#include <vector>

namespace blochgen {

struct Curve {
  std::vector<double> x;
  std::vector<double> y;

  /// Throws std::invalid_argument unless sizes match, n >= 3 and x is
  /// strictly increasing.
  void check() const;
};

/// Separation of the two half-maximum crossings, linearly interpolated,
/// measured above the curve minimum. Throws std::domain_error when the
/// curve has several maxima or a crossing is missing.
double fwhm_interpolated(const Curve& curve);

struct LorentzianFit {
  double center = 0.0;
  double fwhm = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// y = offset + A (w/2)^2 / ((x - x0)^2 + (w/2)^2), damped Gauss-Newton
/// seeded from fwhm_interpolated and the sample maximum.
LorentzianFit lorentzian_fit(const Curve& curve);

struct Peak {
  double x = 0.0;
  double y = 0.0;
};

/// Strict interior local maxima, refined by a 3-point parabola, sorted by x.
std::vector<Peak> peak_find(const Curve& curve);

/// Steady-state excited population of a driven two-level system with drive
/// matrix element omega, population decay gamma_pop and coherence damping
/// gamma_coh (all rad/s):
///   rho22 = (2 W^2 g/G) / (d^2 + g^2 + 4 W^2 g/G).
/// Its FWHM in detuning is 2 sqrt(g^2 + 4 W^2 g/G).
double two_level_steady_state(double omega, double gamma_pop, double gamma_coh, double delta);

/// FWHM (same units as the inputs) of two_level_steady_state over delta.
double power_broadened_fwhm(double omega, double gamma_pop, double gamma_coh);

/// Dark-state coherence -W12 W23 / (W12^2 + W23^2). Throws
/// std::invalid_argument when both are zero.
double cpt_coherence(double omega12, double omega23);

}  // namespace blochgen
