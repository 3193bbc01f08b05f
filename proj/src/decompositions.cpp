#include "crossnorm/decompositions.hpp"

#include "crossnorm/errors.hpp"
#include "crossnorm/tolerances.hpp"

namespace crossnorm {

namespace {

void require_bipartite(const FactorDims& dims, const char* what) {
  if (dims.size() != 2) throw InvalidInputError(std::string(what) + ": bipartite dims required");
}

}  // namespace

SchmidtDecomposition schmidt_vector(const CVector& v, int d1, int d2) {
  if (v.size() != d1 * d2) throw InvalidInputError("schmidt: vector length does not match dims");
  CMatrix amp(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) amp(i, j) = v(i * d2 + j);
  const SvdResult s = svd(amp);
  SchmidtDecomposition out;
  out.coeffs = s.values.cwiseAbs2();
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    out.left.push_back(s.left.col(k));
    out.right.push_back(s.right.col(k).conjugate());
  }
  return out;
}

SchmidtDecomposition schmidt_decompose(const PureState& psi) {
  require_bipartite(psi.dims(), "schmidt_decompose");
  return schmidt_vector(psi.amplitudes(), psi.dims()[0], psi.dims()[1]);
}

CMatrix realign_matrix(const CMatrix& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2) throw InvalidInputError("realign: dims inconsistent");
  CMatrix r(d1 * d1, d2 * d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int k = 0; k < d2; ++k)
        for (int l = 0; l < d2; ++l) r(i * d1 + j, k * d2 + l) = m(i * d2 + k, j * d2 + l);
  return r;
}

CMatrix unrealign_matrix(const CMatrix& r, int d1, int d2) {
  if (r.rows() != d1 * d1 || r.cols() != d2 * d2) throw InvalidInputError("unrealign: dims inconsistent");
  CMatrix m(d1 * d2, d1 * d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int k = 0; k < d2; ++k)
        for (int l = 0; l < d2; ++l) m(i * d2 + k, j * d2 + l) = r(i * d1 + j, k * d2 + l);
  return m;
}

RealignedMatrix realign(const DensityOperator& rho) {
  require_bipartite(rho.dims(), "realign");
  return {realign_matrix(rho.matrix(), rho.dims()[0], rho.dims()[1]), rho.dims()};
}

OperatorSchmidt operator_schmidt_matrix(const CMatrix& m, int d1, int d2) {
  const SvdResult s = svd(realign_matrix(m, d1, d2));
  OperatorSchmidt out;
  std::vector<double> kept;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) < tol::kSchmidtDrop) break;
    kept.push_back(s.values(k));
    CMatrix e(d1, d1), f(d2, d2);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) e(i, j) = s.left(i * d1 + j, k);
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d2; ++j) f(i, j) = std::conj(s.right(i * d2 + j, k));
    out.left.push_back(std::move(e));
    out.right.push_back(std::move(f));
  }
  out.values = Eigen::Map<RVector>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  return out;
}

OperatorSchmidt operator_schmidt(const DensityOperator& rho) {
  require_bipartite(rho.dims(), "operator_schmidt");
  return operator_schmidt_matrix(rho.matrix(), rho.dims()[0], rho.dims()[1]);
}

}  // namespace crossnorm
