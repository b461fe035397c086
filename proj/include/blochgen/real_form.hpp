#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "blochgen/liouvillian.hpp"
#include "blochgen/parameters.hpp"

namespace blochgen {

/// A parameter referenced by the real expansion.
struct ParamRef {
  enum class Kind { Rabi, Decay, Gamma, Detuning };
  Kind kind = Kind::Rabi;
  int a = 0;  // pair lo, or channel from
  int b = 0;  // pair hi, or channel to

  auto operator<=>(const ParamRef&) const = default;
};

struct SignedParam {
  int sign = 1;
  ParamRef ref;
};

/// Matrix entry whose value is  sign0*p0 + sign1*p1 + ...  evaluated left to right.
struct RealEntry {
  std::size_t col = 0;
  std::vector<SignedParam> expr;
};

/// The complex term list expanded into a real sparse matrix over the
/// StateLayout slots; entry order is ascending column within each row.
struct RealSystem {
  int n_levels = 0;
  std::vector<std::vector<RealEntry>> rows;

  std::size_t dimension() const { return rows.size(); }
  std::size_t nonzeros() const;
};

RealSystem expand(const BlochSystem& system);

/// Every numeric value the real system reads.
struct ResolvedParameters {
  std::map<LevelPair, double> rabi;
  std::map<Channel, double> decay;
  std::map<LevelPair, double> gamma;
  std::map<LevelPair, double> detuning;  // connected pairs only

  double value(const ParamRef& ref) const;
};

/// Binds symbols to numbers. Pair detunings are built from mode detunings
/// (driven pairs) and then summed along the stored paths (composed pairs).
/// Throws UnboundHandleError for any missing binding.
ResolvedParameters resolve(const BlochSystem& system, const ParameterSet& params);

double evaluate(const RealEntry& entry, const ResolvedParameters& values);

}  // namespace blochgen
