#pragma once

#include "crossnorm/density.hpp"
#include "crossnorm/states.hpp"
#include "crossnorm/tensor_decomposition.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace crossnorm {

struct OptimizerConfig {
  std::uint64_t seed = 0;
  int restarts = 16;
  /// Pair moves shared by all local-search restarts.
  int max_iter = 500;
  /// Relative improvement below which a descent sweep counts as converged.
  double tol = 1e-8;
  /// Initial size of the random basin-hopping rotation, halved after every
  /// restart that fails to improve.
  double perturbation = 0.1;
};

/// Source of the witness behind an upper bound, in tie-break order.
enum class Strategy { OperatorSchmidt, EigenMixture, LocalSearch, Supplied, Hierarchical, HierarchicalEigen };
const char* to_string(Strategy s);

struct UpperBound {
  TensorDecomposition witness;
  double cost = 0.0;
  Strategy strategy = Strategy::OperatorSchmidt;
  int restarts = 0;
  int iterations = 0;
  double residual = 0.0;
};

enum class Verdict { EntangledCertified, SeparableConsistent, Inconclusive };
const char* to_string(Verdict v);

/// Certified interval for the greatest cross norm; `upper` is the cost of
/// `witness`, which reconstructs the operator.
struct GammaBracket {
  double lower = 0.0;
  double upper = 0.0;
  TensorDecomposition witness;
  Verdict verdict = Verdict::Inconclusive;
  Strategy strategy = Strategy::OperatorSchmidt;
  int restarts = 0;
  int iterations = 0;
  double residual = 0.0;
};

/// (sum_i sqrt p_i)^2 from the Schmidt coefficients.
double gamma_pure(const PureState& psi);
/// sum_ij |a_ij|, after checking that the induced operator is a state.
double gamma_coeff(const CoeffMatrix& c);

/// max(||rho||_1, nuclear norm of the realigned matrix).
double gamma_lower(const DensityOperator& rho);

/// Witnesses used by gamma_upper, exposed for testing and reuse.
TensorDecomposition operator_schmidt_witness(const CMatrix& m, const FactorDims& dims);
/// sum_t lambda_t P_{psi_t}, each projector expanded through the Schmidt form
/// of psi_t. Works for any Hermitian operator.
TensorDecomposition eigen_mixture_witness(const CMatrix& m, const FactorDims& dims);

/// Best verified witness among the operator Schmidt form, the eigen-mixture
/// expansion, local search refinement and the caller's `candidates`.
UpperBound gamma_upper(const DensityOperator& rho, const OptimizerConfig& cfg = {},
                       std::span<const TensorDecomposition> candidates = {});

Verdict separability_verdict(double lower, double upper);

GammaBracket gamma_bracket(const DensityOperator& rho, const OptimizerConfig& cfg = {},
                           std::span<const TensorDecomposition> candidates = {});

// -- measures ---------------------------------------------------------------

enum class MeasureKind { EGamma, F1, F2, F3 };

/// f applied to the gamma norm. All kinds are convex, increasing on [1, inf)
/// and vanish at 1; F3 is exp(a(x-1)) - 1.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::EGamma;
  double a = 1.0;
};

MeasureSpec parse_measure(const std::string& name, double a = 1.0);
const char* to_string(MeasureKind k);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

double measure_value(double x, const MeasureSpec& spec);
Interval measure_bracket(const GammaBracket& b, const MeasureSpec& spec);

// -- multipartite -----------------------------------------------------------

/// Regroups factors into (A | B) where A holds the factors whose bit is set
/// in `mask`; returns the operator on (prod A, prod B).
CMatrix group_bipartition(const CMatrix& m, const FactorDims& dims, unsigned mask, FactorDims& grouped);

/// Max over all bipartitions of the bipartite lower bound.
double gamma_lower_multi(const DensityOperator& rho);

/// |u><v| expanded recursively through Schmidt forms of u and v on
/// (first | rest); exact for rank-one operators.
TensorDecomposition rank_one_witness(const CVector& u, const CVector& v, const FactorDims& dims);
/// Operator Schmidt on (first | rest), recursing on every right factor.
TensorDecomposition hierarchical_witness(const CMatrix& m, const FactorDims& dims);
/// Spectral decomposition with every eigenprojector expanded by
/// rank_one_witness.
TensorDecomposition hierarchical_eigen_witness(const CMatrix& m, const FactorDims& dims);

UpperBound gamma_upper_multi(const DensityOperator& rho, const OptimizerConfig& cfg = {},
                             std::span<const TensorDecomposition> candidates = {});
GammaBracket gamma_bracket_multi(const DensityOperator& rho, const OptimizerConfig& cfg = {},
                                 std::span<const TensorDecomposition> candidates = {});
/// Dispatches to the bipartite or multipartite bracket by factor count.
GammaBracket gamma_bracket_any(const DensityOperator& rho, const OptimizerConfig& cfg = {},
                               std::span<const TensorDecomposition> candidates = {});

Interval multipartite_measure(const DensityOperator& rho, const MeasureSpec& spec, const OptimizerConfig& cfg = {},
                              std::span<const TensorDecomposition> candidates = {});

// -- helpers ----------------------------------------------------------------

/// Drops trailing basis indices of each factor on which m vanishes exactly.
/// Zero-padded embeddings therefore trim back to bitwise the same operator.
struct TrimmedOperator {
  CMatrix matrix;
  FactorDims dims;
};
TrimmedOperator trim_support(const CMatrix& m, const FactorDims& dims);

}  // namespace crossnorm
