#pragma once

#include "crossnorm/density.hpp"
#include "crossnorm/states.hpp"

#include <span>

namespace crossnorm {

struct EntropyReport {
  double value = 0.0;  // nats
  int traced_factor = 1;
  RVector spectrum;  // eigenvalues of the reduced operator, ascending
};

/// -sum lambda ln lambda with 0 ln 0 = 0.
double entropy_of_spectrum(const RVector& lambda);

/// Von Neumann entropy of the reduced operator left after tracing out
/// `traced_factor` (0 or 1).
EntropyReport svn_entropy(const DensityOperator& sigma, int traced_factor = 1);

/// Tr(s ln s) - Tr(s ln r). Returns +infinity when the support of s is not
/// contained in the support of r.
double relative_entropy(const DensityOperator& sigma, const DensityOperator& rho);

/// Minimum of relative_entropy over separable candidates; an upper bound on
/// the relative entropy of entanglement.
double relative_entropy_upper(const DensityOperator& sigma, std::span<const SeparableState> candidates);

}  // namespace crossnorm
