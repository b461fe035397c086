#include "blochgen/units.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace blochgen {

double rad_to_mhz(double rad) {
  const double guess = rad / (2.0 * kPi) / 1e6;
  if (!std::isfinite(guess) || guess == 0.0) return guess;
  // Prefer the shortest decimal that maps back to the same angular value.
  char buf[64];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, guess);
    const double s = std::strtod(buf, nullptr);
    if (mhz_to_rad(s) == rad) return s;
  }
  return guess;
}

}  // namespace blochgen
