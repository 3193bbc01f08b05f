#pragma once

#include "crossnorm/linalg.hpp"

#include <vector>

namespace crossnorm {

/// One elementary tensor u^(1) x ... x u^(n).
struct TensorTerm {
  std::vector<CMatrix> factors;
};

/// Explicit finite sum of elementary tensors. The cost
/// sum_i prod_k ||u_i^(k)||_1 is computed from the terms on construction, so a
/// decomposition always reports the cost it actually has.
class TensorDecomposition {
 public:
  TensorDecomposition() = default;
  /// Each factor k of each term must be square of size dims[k]; terms with a
  /// zero factor are dropped.
  TensorDecomposition(FactorDims dims, std::vector<TensorTerm> terms);

  const FactorDims& dims() const noexcept { return dims_; }
  const std::vector<TensorTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  double cost() const noexcept { return cost_; }

  CMatrix reconstruct() const;
  /// Hilbert-Schmidt distance between the reconstruction and `target`.
  double residual(const CMatrix& target) const;
  bool certifies(const CMatrix& target) const;

  /// Adds a second decomposition's terms; dims must match.
  TensorDecomposition concatenated(const TensorDecomposition& other) const;
  /// Multiplies the first factor of every term by `weight` (>= 0).
  TensorDecomposition scaled(double weight) const;

 private:
  FactorDims dims_;
  std::vector<TensorTerm> terms_;
  double cost_ = 0.0;
};

double term_cost(const TensorTerm& term);

/// Witness for lambda*d1 + (1-lambda)*d2 with cost lambda*c1 + (1-lambda)*c2.
TensorDecomposition mix_decompositions(const TensorDecomposition& d1, const TensorDecomposition& d2,
                                       double lambda);

/// Combines terms whose factors agree up to scalars (within `tol` after
/// normalizing each factor); the cost never increases.
TensorDecomposition merge_parallel_terms(const TensorDecomposition& d, double tol = 1e-11);

/// Zero-pads every factor of every term up to `new_dims`.
TensorDecomposition embed_decomposition(const TensorDecomposition& d, const FactorDims& new_dims);

}  // namespace crossnorm
