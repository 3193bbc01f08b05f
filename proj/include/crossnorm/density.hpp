#pragma once

#include "crossnorm/linalg.hpp"

namespace crossnorm {

/// Hermitian, positive, trace-one matrix annotated with its factor
/// dimensions. Only obtainable through validate_density, so every instance
/// satisfies the invariants.
class DensityOperator {
 public:
  const CMatrix& matrix() const noexcept { return matrix_; }
  const FactorDims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  DensityOperator(CMatrix m, FactorDims dims) : matrix_(std::move(m)), dims_(std::move(dims)) {}
  friend DensityOperator validate_density(const CMatrix& m, const FactorDims& dims);

  CMatrix matrix_;
  FactorDims dims_;
};

/// Checks finiteness, shape against dims, Hermiticity (1e-9), positivity
/// (min eigenvalue >= -1e-9) and unit trace (1e-9). Small negative
/// eigenvalues are clamped to zero; if clamping moves the trace by 1e-9 or
/// more the input is rejected instead. The stored matrix is exactly
/// Hermitian.
DensityOperator validate_density(const CMatrix& m, const FactorDims& dims);

}  // namespace crossnorm
