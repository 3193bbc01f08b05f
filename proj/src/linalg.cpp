#include "crossnorm/linalg.hpp"

#include "crossnorm/density.hpp"
#include "crossnorm/errors.hpp"
#include "crossnorm/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace crossnorm {

const char* to_string(StateProperty p) {
  switch (p) {
    case StateProperty::Hermiticity: return "hermiticity";
    case StateProperty::Positivity: return "positivity";
    case StateProperty::Trace: return "trace";
    case StateProperty::Finiteness: return "finiteness";
    case StateProperty::Shape: return "shape";
    case StateProperty::Normalization: return "normalization";
  }
  return "unknown";
}

FactorDims::FactorDims(std::initializer_list<int> dims) : FactorDims(std::vector<int>(dims)) {}

FactorDims::FactorDims(std::vector<int> dims) : dims_(std::move(dims)) {
  for (int d : dims_) {
    if (d <= 0) throw InvalidInputError("factor dimensions must be positive");
  }
}

int FactorDims::total() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

SvdResult svd(const CMatrix& m) {
  if (!all_finite(m)) throw InvalidInputError("svd: non-finite entries");
  Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success || !solver.singularValues().allFinite())
    throw NumericalError("svd: no convergence");
  return {solver.singularValues(), solver.matrixU(), solver.matrixV()};
}

RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  Eigen::JacobiSVD<CMatrix> solver(m);
  if (solver.info() != Eigen::Success || !solver.singularValues().allFinite())
    throw NumericalError("svd: no convergence");
  return solver.singularValues();
}

EighResult eigh_hermitian(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInputError("eigh: matrix is not square");
  if (!all_finite(m)) throw InvalidInputError("eigh: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::kHermitian * scale)
    throw InvalidInputError("eigh: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: no convergence");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double trace_norm(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInputError("trace_norm: matrix is not square");
  return singular_values(m).sum();
}

double hs_norm(const CMatrix& m) { return m.norm(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  if (factors.empty()) return CMatrix::Identity(1, 1);
  CMatrix out = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

namespace {

void check_dims(const CMatrix& m, const FactorDims& dims, const char* what) {
  if (m.rows() != m.cols() || m.rows() != dims.total())
    throw InvalidInputError(std::string(what) + ": dims inconsistent with matrix size");
}

// Mixed-radix digits of a composite index, most significant factor first.
void digits_of(int index, const FactorDims& dims, std::vector<int>& out) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
}

}  // namespace

CMatrix partial_trace(const CMatrix& m, const FactorDims& dims, std::span<const int> keep) {
  check_dims(m, dims, "partial_trace");
  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || static_cast<std::size_t>(k) >= n || kept[k])
      throw InvalidInputError("partial_trace: bad factor index");
    kept[k] = true;
  }
  int out_dim = 1;
  for (std::size_t k = 0; k < n; ++k)
    if (kept[k]) out_dim *= dims[k];

  const int total = dims.total();
  std::vector<int> row(n), col(n);
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (int i = 0; i < total; ++i) {
    digits_of(i, dims, row);
    for (int j = 0; j < total; ++j) {
      digits_of(j, dims, col);
      bool diagonal = true;
      int oi = 0, oj = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (kept[k]) {
          oi = oi * dims[k] + row[k];
          oj = oj * dims[k] + col[k];
        } else if (row[k] != col[k]) {
          diagonal = false;
          break;
        }
      }
      if (diagonal) out(oi, oj) += m(i, j);
    }
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, const FactorDims& dims, std::initializer_list<int> keep) {
  return partial_trace(m, dims, std::span<const int>(keep.begin(), keep.size()));
}

CMatrix permute_factors(const CMatrix& m, const FactorDims& dims, std::span<const int> perm) {
  check_dims(m, dims, "permute_factors");
  const std::size_t n = dims.size();
  if (perm.size() != n) throw InvalidInputError("permute_factors: permutation size mismatch");
  std::vector<int> new_dims(n);
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (perm[k] < 0 || static_cast<std::size_t>(perm[k]) >= n || seen[perm[k]])
      throw InvalidInputError("permute_factors: not a permutation");
    seen[perm[k]] = true;
    new_dims[k] = dims[perm[k]];
  }
  const int total = dims.total();
  std::vector<int> map(total);
  std::vector<int> digits(n);
  for (int i = 0; i < total; ++i) {
    digits_of(i, dims, digits);
    int j = 0;
    for (std::size_t k = 0; k < n; ++k) j = j * new_dims[k] + digits[perm[k]];
    map[i] = j;
  }
  CMatrix out(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

CMatrix matrix_log(const CMatrix& m) {
  const EighResult eig = eigh_hermitian(m);
  if (eig.values.size() > 0 && eig.values.minCoeff() < -tol::kPsdClamp)
    throw InvalidInputError("matrix_log: matrix is not positive semidefinite");
  const Eigen::Index n = m.rows();
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = eig.values(k);
    if (lambda <= tol::kSupport) continue;
    out += std::log(lambda) * eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  return out;
}

CMatrix kernel_projector(const CMatrix& m, double cutoff) {
  const EighResult eig = eigh_hermitian(m);
  const Eigen::Index n = m.rows();
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    if (eig.values(k) <= cutoff) out += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  return out;
}

namespace {
constexpr double kClampFloor = 1e-14;
}

DensityOperator validate_density(const CMatrix& m, const FactorDims& dims) {
  if (!all_finite(m)) throw InvalidStateError(StateProperty::Finiteness, "non-finite entries");
  if (m.rows() != m.cols()) throw InvalidStateError(StateProperty::Shape, "matrix is not square");
  if (dims.size() == 0 || m.rows() != dims.total())
    throw InvalidStateError(StateProperty::Shape, "dims product does not match matrix size");

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::kHermitian * scale)
    throw InvalidStateError(StateProperty::Hermiticity, "matrix is not Hermitian");

  CMatrix h = hermitian_part(m);
  const Complex tr = h.trace();
  if (std::abs(tr.real() - 1.0) > tol::kTrace)
    throw InvalidStateError(StateProperty::Trace, "trace " + std::to_string(tr.real()) + " differs from 1");

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("validate_density: eigensolver failed");
  const RVector& lambda = solver.eigenvalues();
  if (lambda.minCoeff() < -tol::kPsdClamp)
    throw InvalidStateError(StateProperty::Positivity,
                            "eigenvalue " + std::to_string(lambda.minCoeff()) + " is negative");
  // Rounding-level negativity is left alone; rebuilding from the spectrum
  // would only trade it for fresh rounding noise.
  if (lambda.minCoeff() < -kClampFloor) {
    RVector clamped = lambda.cwiseMax(0.0);
    const double shift = clamped.sum() - lambda.sum();
    if (std::abs(shift) >= tol::kTrace)
      throw InvalidStateError(StateProperty::Positivity, "clamping changes the trace too much");
    clamped /= clamped.sum();
    const CMatrix& v = solver.eigenvectors();
    h = v * clamped.cast<Complex>().asDiagonal() * v.adjoint();
    h = hermitian_part(h);
  }
  return DensityOperator(std::move(h), dims);
}

}  // namespace crossnorm
