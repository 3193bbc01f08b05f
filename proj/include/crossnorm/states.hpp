#pragma once

#include "crossnorm/density.hpp"
#include "crossnorm/linalg.hpp"
#include "crossnorm/random.hpp"
#include "crossnorm/tensor_decomposition.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace crossnorm {

/// Unit vector on a composite space; composite index i1*d2*...+...+in.
class PureState {
 public:
  /// Throws InvalidStateError unless ||amplitudes|| = 1 within 1e-10.
  PureState(FactorDims dims, CVector amplitudes);

  const FactorDims& dims() const noexcept { return dims_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  DensityOperator density() const;

 private:
  FactorDims dims_;
  CVector amplitudes_;
};

/// Coefficients a_ij with orthonormal families phi_i, chi_i defining
/// rho = sum_ij a_ij |phi_i><phi_j| (x) |chi_i><chi_j|.
struct CoeffMatrix {
  CMatrix a;
  std::vector<CVector> basis1;
  std::vector<CVector> basis2;
};

/// Density operator together with a product decomposition proving it
/// separable: every term is w_i * rho1_i (x) rho2_i (x) ... with PSD factors.
struct SeparableState {
  DensityOperator state;
  TensorDecomposition witness;
};

using AnyState = std::variant<PureState, DensityOperator>;

struct GeneratedState {
  AnyState state;
  std::optional<TensorDecomposition> witness;
};

DensityOperator as_density(const AnyState& s);
const FactorDims& dims_of(const AnyState& s);

/// Maximally entangled (1/sqrt d) sum_i |ii> on (d, d); Phi+ for d = 2.
PureState make_bell(int d = 2);
/// (|0...0> + |1...1>)/sqrt 2 on n qubits.
PureState make_ghz(int n = 3);
PureState make_product(const std::vector<CVector>& locals);
DensityOperator make_product_density(const std::vector<CMatrix>& locals);
/// (1-eps)|00><00| + (eps/2)(|12>-|21>)(<12|-<21|) on (3, 3).
DensityOperator make_rho_eps(double eps);
/// sqrt(p)|00> + sqrt(1-p)|11> on (2, 2).
PureState make_two_term(double p);
DensityOperator make_coeff_state(const CoeffMatrix& c);
PureState make_random_pure(const FactorDims& dims, std::uint64_t seed);
DensityOperator make_random_density(const FactorDims& dims, std::uint64_t seed, int rank = 0);
SeparableState make_random_separable(const FactorDims& dims, int terms, std::uint64_t seed);
/// sum_i w_i rho_i; weights non-negative and summing to 1.
DensityOperator make_mixture(const std::vector<DensityOperator>& states, const std::vector<double>& weights);
/// Random PSD trace-one a of size r with random orthonormal families.
CoeffMatrix make_random_coeff(int d1, int d2, int r, std::uint64_t seed);

/// Checks that `witness` has PSD factors and reconstructs `state`.
SeparableState make_separable(const DensityOperator& state, TensorDecomposition witness);

/// Name-based generator used by the CLI. Kinds: bell, ghz, product, rho-eps,
/// two-term, coeff, random-pure, random-density, random-separable, mixture.
GeneratedState make_state(std::string_view kind, const nlohmann::json& params);

/// Zero-pads every factor up to new_dims.
DensityOperator embed_state(const DensityOperator& s, const FactorDims& new_dims);
CMatrix embed_matrix(const CMatrix& m, const FactorDims& dims, const FactorDims& new_dims);

}  // namespace crossnorm
