#pragma once

#include <numbers>

namespace blochgen {

inline constexpr double kPi = std::numbers::pi;

/// Ordinary frequency in MHz to angular frequency in rad/s, evaluated as
/// 2*Pi*(mhz*1e6) so that emitted C literals like "2*Pi*5e6" reproduce it.
inline double mhz_to_rad(double mhz) { return 2.0 * kPi * (mhz * 1e6); }

/// Inverse of mhz_to_rad. The result is the shortest decimal that maps back
/// to `rad` exactly whenever such a value exists nearby.
double rad_to_mhz(double rad);

}  // namespace blochgen
