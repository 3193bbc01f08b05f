#pragma once

#include "crossnorm/density.hpp"
#include "crossnorm/linalg.hpp"
#include "crossnorm/states.hpp"

#include <vector>

namespace crossnorm {

/// psi = sum_i sqrt(p_i) a_i (x) b_i with p descending.
struct SchmidtDecomposition {
  RVector coeffs;  // p_i, summing to 1
  std::vector<CVector> left;
  std::vector<CVector> right;

  double sum_sqrt() const { return coeffs.cwiseSqrt().sum(); }
};

/// Rearranged operator: entry (i*d1 + j, k*d2 + l) holds <i k| rho |j l>.
struct RealignedMatrix {
  CMatrix matrix;
  FactorDims source_dims;

  double nuclear_norm() const { return singular_values(matrix).sum(); }
};

/// rho = sum_k s_k E_k (x) F_k with Hilbert-Schmidt orthonormal families.
struct OperatorSchmidt {
  RVector values;  // descending, each >= 1e-12
  std::vector<CMatrix> left;
  std::vector<CMatrix> right;
};

/// Schmidt form of a vector on (d1, d2), also used for non-normalized vectors;
/// then the coefficients sum to ||v||^2.
SchmidtDecomposition schmidt_vector(const CVector& v, int d1, int d2);
SchmidtDecomposition schmidt_decompose(const PureState& psi);

CMatrix realign_matrix(const CMatrix& m, int d1, int d2);
/// Inverse of realign_matrix.
CMatrix unrealign_matrix(const CMatrix& r, int d1, int d2);
RealignedMatrix realign(const DensityOperator& rho);

/// Operator Schmidt decomposition of any (d1 d2) x (d1 d2) operator.
OperatorSchmidt operator_schmidt_matrix(const CMatrix& m, int d1, int d2);
OperatorSchmidt operator_schmidt(const DensityOperator& rho);

}  // namespace crossnorm
