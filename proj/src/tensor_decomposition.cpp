#include "crossnorm/tensor_decomposition.hpp"

#include "crossnorm/errors.hpp"
#include "crossnorm/tolerances.hpp"

#include <algorithm>

namespace crossnorm {

double term_cost(const TensorTerm& term) {
  double c = 1.0;
  for (const CMatrix& f : term.factors) c *= trace_norm(f);
  return c;
}

TensorDecomposition::TensorDecomposition(FactorDims dims, std::vector<TensorTerm> terms)
    : dims_(std::move(dims)) {
  terms_.reserve(terms.size());
  for (TensorTerm& t : terms) {
    if (t.factors.size() != dims_.size())
      throw InvalidInputError("tensor decomposition: wrong number of factors in a term");
    bool zero = false;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      const CMatrix& f = t.factors[k];
      if (f.rows() != dims_[k] || f.cols() != dims_[k])
        throw InvalidInputError("tensor decomposition: factor shape does not match dims");
      if (!all_finite(f)) throw InvalidInputError("tensor decomposition: non-finite factor");
      if (f.isZero(0.0)) zero = true;
    }
    if (zero) continue;
    cost_ += term_cost(t);
    terms_.push_back(std::move(t));
  }
}

CMatrix TensorDecomposition::reconstruct() const {
  const int n = dims_.total();
  CMatrix out = CMatrix::Zero(n, n);
  for (const TensorTerm& t : terms_) out += kron_all(t.factors);
  return out;
}

double TensorDecomposition::residual(const CMatrix& target) const {
  if (target.rows() != dims_.total() || target.cols() != dims_.total())
    throw InvalidInputError("tensor decomposition: target size does not match dims");
  return (reconstruct() - target).norm();
}

bool TensorDecomposition::certifies(const CMatrix& target) const {
  return residual(target) <= tol::kWitnessResidual;
}

TensorDecomposition TensorDecomposition::concatenated(const TensorDecomposition& other) const {
  if (!(other.dims_ == dims_)) throw InvalidInputError("tensor decomposition: dims mismatch");
  std::vector<TensorTerm> terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return TensorDecomposition(dims_, std::move(terms));
}

TensorDecomposition TensorDecomposition::scaled(double weight) const {
  if (!(weight >= 0.0)) throw InvalidInputError("tensor decomposition: negative weight");
  std::vector<TensorTerm> terms = terms_;
  for (TensorTerm& t : terms) t.factors.front() *= weight;
  return TensorDecomposition(dims_, std::move(terms));
}

TensorDecomposition mix_decompositions(const TensorDecomposition& d1, const TensorDecomposition& d2,
                                       double lambda) {
  if (!(d1.dims() == d2.dims())) throw InvalidInputError("mix_decompositions: dims mismatch");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInputError("mix_decompositions: lambda outside [0,1]");
  if (lambda == 1.0) return d1;
  if (lambda == 0.0) return d2;
  return d1.scaled(lambda).concatenated(d2.scaled(1.0 - lambda));
}

TensorDecomposition embed_decomposition(const TensorDecomposition& d, const FactorDims& new_dims) {
  if (new_dims.size() != d.dims().size()) throw InvalidInputError("embed_decomposition: factor count mismatch");
  for (std::size_t k = 0; k < new_dims.size(); ++k)
    if (new_dims[k] < d.dims()[k]) throw InvalidInputError("embed_decomposition: dims may not shrink");
  std::vector<TensorTerm> terms;
  terms.reserve(d.size());
  for (const TensorTerm& t : d.terms()) {
    TensorTerm e;
    for (std::size_t k = 0; k < new_dims.size(); ++k) {
      CMatrix f = CMatrix::Zero(new_dims[k], new_dims[k]);
      f.topLeftCorner(t.factors[k].rows(), t.factors[k].cols()) = t.factors[k];
      e.factors.push_back(std::move(f));
    }
    terms.push_back(std::move(e));
  }
  return TensorDecomposition(new_dims, std::move(terms));
}

TensorDecomposition merge_parallel_terms(const TensorDecomposition& d, double tol) {
  struct Group {
    std::vector<CMatrix> unit;
    Complex weight;
  };
  std::vector<Group> groups;
  for (const TensorTerm& t : d.terms()) {
    Group g{{}, Complex(1.0)};
    for (const CMatrix& f : t.factors) {
      Eigen::Index r, c;
      f.cwiseAbs().maxCoeff(&r, &c);
      const Complex phase = f(r, c) / std::abs(f(r, c));
      const double norm = f.norm();
      g.unit.push_back(f / (phase * norm));
      g.weight *= phase * norm;
    }
    auto same = [&](const Group& h) {
      for (std::size_t k = 0; k < g.unit.size(); ++k)
        if ((h.unit[k] - g.unit[k]).cwiseAbs().maxCoeff() > tol) return false;
      return true;
    };
    const auto it = std::find_if(groups.begin(), groups.end(), same);
    if (it == groups.end())
      groups.push_back(std::move(g));
    else
      it->weight += g.weight;
  }
  std::vector<TensorTerm> terms;
  for (Group& g : groups) {
    g.unit.front() *= g.weight;
    terms.push_back({std::move(g.unit)});
  }
  return TensorDecomposition(d.dims(), std::move(terms));
}

}  // namespace crossnorm
