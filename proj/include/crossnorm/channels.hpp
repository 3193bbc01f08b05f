#pragma once

#include "crossnorm/density.hpp"
#include "crossnorm/linalg.hpp"
#include "crossnorm/tensor_decomposition.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crossnorm {

/// Operation T(s) = sum_k A_k^H s A_k with sum_k A_k A_k^H <= 1. Each A_k is
/// dim_in x dim_out. Note the ordering: this is the adjoint of the more
/// common A s A^H convention, so A_k here corresponds to A_k^H there.
struct KrausChannel {
  std::vector<CMatrix> kraus;
  int dim_in = 0;
  int dim_out = 0;
  bool trace_preserving = false;
  bool trace_nonincreasing = false;
  double choi_min_eigenvalue = 0.0;
  /// Set when the Choi matrix is slightly negative (advisory only).
  std::optional<std::string> warning;
};

/// Complete family of mutually orthogonal projectors.
struct LudersOperation {
  std::vector<CMatrix> projectors;
};

struct Branch {
  int i = 0;
  int j = 0;
  double probability = 0.0;
  DensityOperator state;
};

struct MeasurementOutcome {
  std::vector<Branch> branches;  // lexicographic in (i, j)
  double total_probability = 0.0;
};

/// Throws InvalidChannelError when the largest eigenvalue of sum A A^H
/// exceeds 1 + 1e-9 or the Choi matrix is clearly not PSD.
KrausChannel validate_channel(std::vector<CMatrix> kraus);
KrausChannel identity_channel(int dim);
KrausChannel unitary_channel(const CMatrix& u);
/// Kraus family {|i><j| / sqrt d}: maps every state to 1/d.
KrausChannel depolarizing_channel(int dim);
/// Kraus family from the projectors themselves.
KrausChannel luders_channel(const LudersOperation& l);
/// Random trace-non-increasing channel with `count` Kraus operators. When
/// `trace_preserving` is false the family is scaled down by a random factor.
KrausChannel random_channel(int dim_in, int dim_out, int count, bool trace_preserving, std::uint64_t seed);

/// Choi matrix sum_ij |i><j| (x) T(|i><j|).
CMatrix choi_matrix(const KrausChannel& c);
/// E = sum_k A_k A_k^H.
CMatrix effect_of(const KrausChannel& c);

CMatrix apply_channel(const KrausChannel& c, const CMatrix& sigma);
CMatrix apply_channel(const KrausChannel& c, const DensityOperator& sigma);
/// Product channel with Kraus family {A_k (x) B_l}.
KrausChannel tensor_channel(const KrausChannel& t1, const KrausChannel& t2);

struct LocalOutput {
  CMatrix matrix;
  /// Present when both channels are trace preserving.
  std::optional<DensityOperator> state;
};
LocalOutput apply_local(const KrausChannel& t1, const KrausChannel& t2, const DensityOperator& sigma);

/// Terms (T1(x_i), T2(y_i)); the cost does not increase.
TensorDecomposition pushforward_decomposition(const KrausChannel& t1, const KrausChannel& t2,
                                              const TensorDecomposition& d);

LudersOperation validate_luders(std::vector<CMatrix> projectors);
/// Projectors onto consecutive blocks of the computational basis with the
/// given sizes.
LudersOperation block_luders(int dim, const std::vector<int>& block_sizes);
/// Random complete projector family of the given ranks in a random basis.
LudersOperation random_luders(int dim, const std::vector<int>& ranks, std::uint64_t seed);

/// All branches (P_i (x) Q_j) s (P_i (x) Q_j) with probability >= 1e-12.
MeasurementOutcome luders_outcomes(const LudersOperation& l1, const LudersOperation& l2,
                                   const DensityOperator& sigma);

/// T(s) / Tr T(s). This selects a subensemble and is not an operation under
/// which entanglement measures are monotone; it can increase entanglement.
DensityOperator post_select(const KrausChannel& c, const DensityOperator& sigma);

}  // namespace crossnorm
