#pragma once

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace crossnorm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Dimensions of the tensor factors of a composite system, in order.
class FactorDims {
 public:
  FactorDims() = default;
  FactorDims(std::initializer_list<int> dims);
  explicit FactorDims(std::vector<int> dims);

  std::size_t size() const noexcept { return dims_.size(); }
  int operator[](std::size_t k) const { return dims_[k]; }
  int total() const noexcept;
  const std::vector<int>& values() const noexcept { return dims_; }

  auto begin() const noexcept { return dims_.begin(); }
  auto end() const noexcept { return dims_.end(); }

  friend bool operator==(const FactorDims&, const FactorDims&) = default;

 private:
  std::vector<int> dims_;
};

struct SvdResult {
  RVector values;  // descending
  CMatrix left;
  CMatrix right;

  double nuclear_norm() const { return values.sum(); }
};

struct EighResult {
  RVector values;  // ascending
  CMatrix vectors;
};

/// Thin SVD, m = left * diag(values) * right^H.
SvdResult svd(const CMatrix& m);
RVector singular_values(const CMatrix& m);

/// Eigendecomposition of a Hermitian matrix. Throws InvalidInputError when
/// ||m - m^H||_max exceeds 1e-9 * max(1, ||m||_max).
EighResult eigh_hermitian(const CMatrix& m);

double trace_norm(const CMatrix& m);
double hs_norm(const CMatrix& m);
bool all_finite(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(std::span<const CMatrix> factors);
CVector kron(const CVector& a, const CVector& b);

/// Partial trace keeping the factors listed in `keep` (in their original
/// order). An empty `keep` yields the 1x1 scalar trace.
CMatrix partial_trace(const CMatrix& m, const FactorDims& dims, std::span<const int> keep);
CMatrix partial_trace(const CMatrix& m, const FactorDims& dims, std::initializer_list<int> keep);

/// Reorders tensor factors: factor k of the result is factor perm[k] of m.
CMatrix permute_factors(const CMatrix& m, const FactorDims& dims, std::span<const int> perm);

/// Spectral logarithm on the support (eigenvalues above 1e-12). Throws on
/// eigenvalues below -1e-9.
CMatrix matrix_log(const CMatrix& m);

/// Projector onto the eigenvectors of a Hermitian matrix with eigenvalue at
/// most `cutoff`.
CMatrix kernel_projector(const CMatrix& m, double cutoff);

CMatrix hermitian_part(const CMatrix& m);

}  // namespace crossnorm
