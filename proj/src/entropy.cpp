#include "crossnorm/entropy.hpp"

#include "crossnorm/errors.hpp"
#include "crossnorm/tolerances.hpp"

#include <cmath>
#include <limits>

namespace crossnorm {

double entropy_of_spectrum(const RVector& lambda) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    if (lambda(k) > tol::kSupport) s -= lambda(k) * std::log(lambda(k));
  return std::max(s, 0.0);
}

EntropyReport svn_entropy(const DensityOperator& sigma, int traced_factor) {
  if (sigma.dims().size() != 2) throw InvalidInputError("svn_entropy: bipartite state required");
  if (traced_factor != 0 && traced_factor != 1) throw InvalidInputError("svn_entropy: factor must be 0 or 1");
  const int keep = 1 - traced_factor;
  const CMatrix reduced = partial_trace(sigma.matrix(), sigma.dims(), {keep});
  EntropyReport r;
  r.traced_factor = traced_factor;
  r.spectrum = eigh_hermitian(hermitian_part(reduced)).values;
  r.value = entropy_of_spectrum(r.spectrum);
  return r;
}

double relative_entropy(const DensityOperator& sigma, const DensityOperator& rho) {
  if (!(sigma.dims() == rho.dims())) throw InvalidInputError("relative_entropy: dims mismatch");
  const EighResult es = eigh_hermitian(sigma.matrix());
  const EighResult er = eigh_hermitian(rho.matrix());

  // Weight of sigma outside supp(rho).
  double outside = 0.0;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < er.values.size(); ++k) {
    const CVector& v = er.vectors.col(k);
    const double w = (v.adjoint() * sigma.matrix() * v)(0, 0).real();
    if (er.values(k) <= tol::kSupport) {
      outside += w;
    } else {
      cross += w * std::log(er.values(k));
    }
  }
  if (outside > tol::kSupport) return std::numeric_limits<double>::infinity();
  return std::max(-entropy_of_spectrum(es.values) - cross, 0.0);
}

double relative_entropy_upper(const DensityOperator& sigma, std::span<const SeparableState> candidates) {
  if (candidates.empty()) throw InvalidInputError("relative_entropy_upper: no candidates");
  double best = std::numeric_limits<double>::infinity();
  for (const SeparableState& c : candidates) best = std::min(best, relative_entropy(sigma, c.state));
  return best;
}

}  // namespace crossnorm
