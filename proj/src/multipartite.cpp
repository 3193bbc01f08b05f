#include "crossnorm/decompositions.hpp"
#include "crossnorm/errors.hpp"
#include "crossnorm/gamma.hpp"
#include "crossnorm/tolerances.hpp"

#include <optional>

namespace crossnorm {

namespace {

// Schmidt values below this are treated as absent when expanding witnesses.
constexpr double kExpansionCutoff = 1e-15;

FactorDims tail_dims(const FactorDims& dims) {
  return FactorDims(std::vector<int>(dims.begin() + 1, dims.end()));
}

}  // namespace

CMatrix group_bipartition(const CMatrix& m, const FactorDims& dims, unsigned mask, FactorDims& grouped) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> perm;
  int da = 1, db = 1, left = 0;
  for (int k = 0; k < n; ++k)
    if (mask & (1u << k)) perm.push_back(k), da *= dims[k], ++left;
  for (int k = 0; k < n; ++k)
    if (!(mask & (1u << k))) perm.push_back(k), db *= dims[k];
  if (left == 0 || left == n) throw InvalidInputError("group_bipartition: one side is empty");
  grouped = FactorDims{da, db};
  return permute_factors(m, dims, perm);
}

double gamma_lower_multi(const DensityOperator& rho) {
  const FactorDims& dims = rho.dims();
  if (dims.size() < 2) throw InvalidInputError("gamma_lower_multi: at least two factors required");
  if (dims.size() == 2) return gamma_lower(rho);
  const TrimmedOperator t = trim_support(rho.matrix(), dims);
  const unsigned n = static_cast<unsigned>(dims.size());
  double best = trace_norm(t.matrix);
  // Factor 0 always sits on the left, so each bipartition is visited once.
  for (unsigned mask = 1; mask < (1u << n) - 1; mask += 2) {
    FactorDims grouped;
    const CMatrix g = group_bipartition(t.matrix, t.dims, mask, grouped);
    best = std::max(best, singular_values(realign_matrix(g, grouped[0], grouped[1])).sum());
  }
  return best;
}

TensorDecomposition rank_one_witness(const CVector& u, const CVector& v, const FactorDims& dims) {
  if (u.size() != dims.total() || v.size() != dims.total())
    throw InvalidInputError("rank_one_witness: vector length does not match dims");
  if (dims.size() == 1) return TensorDecomposition(dims, {{{u * v.adjoint()}}});
  const FactorDims rest = tail_dims(dims);
  const SchmidtDecomposition su = schmidt_vector(u, dims[0], rest.total());
  const SchmidtDecomposition sv = schmidt_vector(v, dims[0], rest.total());
  std::vector<TensorTerm> terms;
  for (Eigen::Index i = 0; i < su.coeffs.size(); ++i) {
    const double si = std::sqrt(su.coeffs(i));
    if (si <= kExpansionCutoff) continue;
    for (Eigen::Index j = 0; j < sv.coeffs.size(); ++j) {
      const double tj = std::sqrt(sv.coeffs(j));
      if (tj <= kExpansionCutoff) continue;
      const CMatrix head = (si * tj) * su.left[i] * sv.left[j].adjoint();
      const TensorDecomposition sub = rank_one_witness(su.right[i], sv.right[j], rest);
      for (const TensorTerm& st : sub.terms()) {
        TensorTerm term;
        term.factors.push_back(head);
        term.factors.insert(term.factors.end(), st.factors.begin(), st.factors.end());
        terms.push_back(std::move(term));
      }
    }
  }
  return TensorDecomposition(dims, std::move(terms));
}

TensorDecomposition hierarchical_witness(const CMatrix& m, const FactorDims& dims) {
  if (dims.size() == 1) return TensorDecomposition(dims, {{{m}}});
  const FactorDims rest = tail_dims(dims);
  const OperatorSchmidt os = operator_schmidt_matrix(m, dims[0], rest.total());
  std::vector<TensorTerm> terms;
  for (std::size_t k = 0; k < os.left.size(); ++k) {
    const CMatrix head = os.values(static_cast<Eigen::Index>(k)) * os.left[k];
    const TensorDecomposition sub = hierarchical_witness(os.right[k], rest);
    for (const TensorTerm& st : sub.terms()) {
      TensorTerm term;
      term.factors.push_back(head);
      term.factors.insert(term.factors.end(), st.factors.begin(), st.factors.end());
      terms.push_back(std::move(term));
    }
  }
  // Eigenvectors sharing Schmidt vectors produce parallel terms.
  return merge_parallel_terms(TensorDecomposition(dims, std::move(terms)));
}

TensorDecomposition hierarchical_eigen_witness(const CMatrix& m, const FactorDims& dims) {
  const EighResult eig = eigh_hermitian(m);
  std::vector<TensorTerm> terms;
  for (Eigen::Index t = 0; t < eig.values.size(); ++t) {
    const double lambda = eig.values(t);
    if (std::abs(lambda) <= kExpansionCutoff) continue;
    const CVector v = eig.vectors.col(t);
    const TensorDecomposition projector = rank_one_witness(v, v, dims);
    for (TensorTerm term : projector.terms()) {
      term.factors.front() *= lambda;
      terms.push_back(std::move(term));
    }
  }
  // Eigenvectors sharing Schmidt vectors produce parallel terms.
  return merge_parallel_terms(TensorDecomposition(dims, std::move(terms)));
}

UpperBound gamma_upper_multi(const DensityOperator& rho, const OptimizerConfig& cfg,
                             std::span<const TensorDecomposition> candidates) {
  if (rho.dims().size() < 2) throw InvalidInputError("gamma_upper_multi: at least two factors required");
  if (rho.dims().size() == 2) return gamma_upper(rho, cfg, candidates);
  const TrimmedOperator t = trim_support(rho.matrix(), rho.dims());
  auto lift = [&](TensorDecomposition w) {
    return t.dims == rho.dims() ? w : embed_decomposition(w, rho.dims());
  };
  struct Pick {
    TensorDecomposition w;
    Strategy s;
    double residual;
  };
  std::optional<Pick> best;
  auto offer = [&](TensorDecomposition w, Strategy s) {
    const double r = w.residual(rho.matrix());
    if (!(r <= tol::kWitnessResidual)) return;
    if (!best || w.cost() < best->w.cost()) best = Pick{std::move(w), s, r};
  };
  offer(lift(hierarchical_witness(t.matrix, t.dims)), Strategy::Hierarchical);
  offer(lift(hierarchical_eigen_witness(t.matrix, t.dims)), Strategy::HierarchicalEigen);
  for (const TensorDecomposition& c : candidates) {
    if (!(c.dims() == rho.dims())) throw InvalidInputError("gamma_upper_multi: candidate dims do not match");
    offer(c, Strategy::Supplied);
  }
  if (!best) throw NumericalError("gamma_upper_multi: no witness passed the reconstruction check");
  UpperBound out;
  out.cost = best->w.cost();
  out.strategy = best->s;
  out.residual = best->residual;
  out.witness = std::move(best->w);
  return out;
}

}  // namespace crossnorm
