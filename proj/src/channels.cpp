#include "crossnorm/channels.hpp"

#include "crossnorm/errors.hpp"
#include "crossnorm/random.hpp"
#include "crossnorm/tolerances.hpp"

#include <cmath>
#include <numeric>

namespace crossnorm {

KrausChannel validate_channel(std::vector<CMatrix> kraus) {
  if (kraus.empty()) throw InvalidChannelError("channel has no Kraus operators");
  const auto rows = kraus.front().rows();
  const auto cols = kraus.front().cols();
  if (rows == 0 || cols == 0) throw InvalidChannelError("empty Kraus operator");
  for (const CMatrix& a : kraus) {
    if (a.rows() != rows || a.cols() != cols) throw InvalidChannelError("Kraus operators differ in shape");
    if (!all_finite(a)) throw InvalidChannelError("non-finite Kraus operator");
  }
  KrausChannel c;
  c.kraus = std::move(kraus);
  c.dim_in = static_cast<int>(rows);
  c.dim_out = static_cast<int>(cols);

  const CMatrix e = effect_of(c);
  const RVector lambda = eigh_hermitian(e).values;
  if (lambda.maxCoeff() > 1.0 + tol::kChannelBound)
    throw InvalidChannelError("sum_k A_k A_k^H exceeds the identity (max eigenvalue " +
                              std::to_string(lambda.maxCoeff()) + ")");
  c.trace_nonincreasing = true;
  c.trace_preserving = (e - CMatrix::Identity(rows, rows)).cwiseAbs().maxCoeff() <= tol::kChannelBound;

  const RVector choi = eigh_hermitian(choi_matrix(c)).values;
  c.choi_min_eigenvalue = choi.minCoeff();
  if (c.choi_min_eigenvalue < -tol::kChoiReject)
    throw InvalidChannelError("Choi matrix is not positive semidefinite");
  if (c.choi_min_eigenvalue < -tol::kChoiWarn)
    c.warning = "Choi matrix slightly negative: " + std::to_string(c.choi_min_eigenvalue);
  return c;
}

KrausChannel identity_channel(int dim) { return validate_channel({CMatrix::Identity(dim, dim)}); }

KrausChannel unitary_channel(const CMatrix& u) { return validate_channel({u}); }

KrausChannel depolarizing_channel(int dim) {
  std::vector<CMatrix> ops;
  const double w = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      CMatrix a = CMatrix::Zero(dim, dim);
      a(i, j) = w;
      ops.push_back(std::move(a));
    }
  return validate_channel(std::move(ops));
}

KrausChannel luders_channel(const LudersOperation& l) { return validate_channel(l.projectors); }

KrausChannel random_channel(int dim_in, int dim_out, int count, bool trace_preserving, std::uint64_t seed) {
  if (count < 1) throw InvalidInputError("random_channel: need at least one Kraus operator");
  const int width = dim_out * count;
  if (trace_preserving && width < dim_in)
    throw InvalidInputError("random_channel: a trace-preserving family needs count * dim_out >= dim_in");
  Rng rng(seed);
  // Stack the Kraus operators side by side as V (dim_in x width), so that
  // V V^H = sum A A^H. Orthonormal rows make the channel trace preserving.
  CMatrix v;
  if (width >= dim_in) {
    const CMatrix g = random_gaussian(width, dim_in, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    v = (qr.householderQ() * CMatrix::Identity(width, dim_in)).adjoint();
  } else {
    v = random_gaussian(dim_in, width, rng);
    v /= singular_values(v).maxCoeff();
  }
  if (!trace_preserving) v *= std::sqrt(std::uniform_real_distribution<double>(0.3, 0.95)(rng));
  std::vector<CMatrix> ops;
  for (int k = 0; k < count; ++k) ops.push_back(v.middleCols(k * dim_out, dim_out));
  return validate_channel(std::move(ops));
}

CMatrix choi_matrix(const KrausChannel& c) {
  const int din = c.dim_in, dout = c.dim_out;
  CMatrix out = CMatrix::Zero(din * dout, din * dout);
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      CMatrix eij = CMatrix::Zero(din, din);
      eij(i, j) = 1.0;
      out.block(i * dout, j * dout, dout, dout) = apply_channel(c, eij);
    }
  return out;
}

CMatrix effect_of(const KrausChannel& c) {
  CMatrix e = CMatrix::Zero(c.kraus.front().rows(), c.kraus.front().rows());
  for (const CMatrix& a : c.kraus) e += a * a.adjoint();
  return hermitian_part(e);
}

CMatrix apply_channel(const KrausChannel& c, const CMatrix& sigma) {
  if (sigma.rows() != c.dim_in || sigma.cols() != c.dim_in)
    throw InvalidInputError("apply_channel: operator size does not match channel input");
  CMatrix out = CMatrix::Zero(c.dim_out, c.dim_out);
  for (const CMatrix& a : c.kraus) out.noalias() += a.adjoint() * sigma * a;
  return out;
}

CMatrix apply_channel(const KrausChannel& c, const DensityOperator& sigma) {
  return apply_channel(c, sigma.matrix());
}

KrausChannel tensor_channel(const KrausChannel& t1, const KrausChannel& t2) {
  std::vector<CMatrix> ops;
  ops.reserve(t1.kraus.size() * t2.kraus.size());
  for (const CMatrix& a : t1.kraus)
    for (const CMatrix& b : t2.kraus) ops.push_back(kron(a, b));
  return validate_channel(std::move(ops));
}

LocalOutput apply_local(const KrausChannel& t1, const KrausChannel& t2, const DensityOperator& sigma) {
  const FactorDims& dims = sigma.dims();
  if (dims.size() != 2 || dims[0] != t1.dim_in || dims[1] != t2.dim_in)
    throw InvalidInputError("apply_local: channel input dims do not match the state's factors");
  LocalOutput out;
  out.matrix = CMatrix::Zero(t1.dim_out * t2.dim_out, t1.dim_out * t2.dim_out);
  for (const CMatrix& a : t1.kraus)
    for (const CMatrix& b : t2.kraus) {
      const CMatrix ab = kron(a, b);
      out.matrix.noalias() += ab.adjoint() * sigma.matrix() * ab;
    }
  if (t1.trace_preserving && t2.trace_preserving)
    out.state = validate_density(out.matrix, {t1.dim_out, t2.dim_out});
  return out;
}

TensorDecomposition pushforward_decomposition(const KrausChannel& t1, const KrausChannel& t2,
                                              const TensorDecomposition& d) {
  const FactorDims& dims = d.dims();
  if (dims.size() != 2 || dims[0] != t1.dim_in || dims[1] != t2.dim_in)
    throw InvalidInputError("pushforward: channel input dims do not match the decomposition");
  std::vector<TensorTerm> terms;
  terms.reserve(d.size());
  for (const TensorTerm& t : d.terms())
    terms.push_back({{apply_channel(t1, t.factors[0]), apply_channel(t2, t.factors[1])}});
  return TensorDecomposition({t1.dim_out, t2.dim_out}, std::move(terms));
}

LudersOperation validate_luders(std::vector<CMatrix> projectors) {
  if (projectors.empty()) throw InvalidInputError("Luders family is empty");
  const auto n = projectors.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const CMatrix& p = projectors[k];
    if (p.rows() != n || p.cols() != n) throw InvalidInputError("Luders projectors differ in shape");
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol::kProjector)
      throw InvalidInputError("Luders projector is not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol::kProjector)
      throw InvalidInputError("Luders operator is not idempotent");
    for (std::size_t l = 0; l < k; ++l)
      if ((p * projectors[l]).cwiseAbs().maxCoeff() > tol::kProjector)
        throw InvalidInputError("Luders projectors are not mutually orthogonal");
    sum += p;
  }
  if ((sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::kProjector)
    throw InvalidInputError("Luders family is incomplete (projectors do not sum to 1)");
  return {std::move(projectors)};
}

LudersOperation block_luders(int dim, const std::vector<int>& block_sizes) {
  std::vector<CMatrix> ps;
  int start = 0;
  for (int size : block_sizes) {
    if (size < 1) throw InvalidInputError("block_luders: block sizes must be positive");
    CMatrix p = CMatrix::Zero(dim, dim);
    for (int i = start; i < start + size && i < dim; ++i) p(i, i) = 1.0;
    ps.push_back(std::move(p));
    start += size;
  }
  if (start != dim) throw InvalidInputError("block_luders: block sizes must sum to the dimension");
  return validate_luders(std::move(ps));
}

LudersOperation random_luders(int dim, const std::vector<int>& ranks, std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix u = random_unitary(dim, rng);
  std::vector<CMatrix> ps;
  int start = 0;
  for (int r : ranks) {
    if (r < 1 || start + r > dim) throw InvalidInputError("random_luders: bad ranks");
    const CMatrix cols = u.middleCols(start, r);
    ps.push_back(hermitian_part(cols * cols.adjoint()));
    start += r;
  }
  if (start != dim) throw InvalidInputError("random_luders: ranks must sum to the dimension");
  return validate_luders(std::move(ps));
}

MeasurementOutcome luders_outcomes(const LudersOperation& l1, const LudersOperation& l2,
                                   const DensityOperator& sigma) {
  const FactorDims& dims = sigma.dims();
  if (dims.size() != 2) throw InvalidInputError("luders_outcomes: bipartite state required");
  validate_luders(l1.projectors);
  validate_luders(l2.projectors);
  if (l1.projectors.front().rows() != dims[0] || l2.projectors.front().rows() != dims[1])
    throw InvalidInputError("luders_outcomes: projector sizes do not match the state's factors");
  MeasurementOutcome out;
  for (std::size_t i = 0; i < l1.projectors.size(); ++i)
    for (std::size_t j = 0; j < l2.projectors.size(); ++j) {
      const CMatrix pq = kron(l1.projectors[i], l2.projectors[j]);
      const CMatrix branch = pq * sigma.matrix() * pq;
      const double p = branch.trace().real();
      out.total_probability += p;
      if (p < tol::kBranchCutoff) continue;
      out.branches.push_back({static_cast<int>(i), static_cast<int>(j), p, validate_density(branch / p, dims)});
    }
  if (std::abs(out.total_probability - 1.0) > tol::kTrace)
    throw InternalError("luders_outcomes: branch probabilities do not sum to 1");
  return out;
}

DensityOperator post_select(const KrausChannel& c, const DensityOperator& sigma) {
  const CMatrix out = apply_channel(c, sigma);
  const double p = out.trace().real();
  if (p <= tol::kBranchCutoff) throw DegenerateBranchError("post_select: branch has vanishing probability");
  const FactorDims dims = c.dim_out == c.dim_in ? sigma.dims() : FactorDims{c.dim_out};
  return validate_density(out / p, dims);
}

}  // namespace crossnorm
