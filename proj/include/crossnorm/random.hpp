#pragma once

#include "crossnorm/linalg.hpp"

#include <cstdint>
#include <random>

namespace crossnorm {

using Rng = std::mt19937_64;

/// Deterministic sub-seed for stream `index` of a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

CMatrix random_gaussian(int rows, int cols, Rng& rng);
/// Unit vector with complex-Gaussian amplitudes.
CVector random_unit_vector(int dim, Rng& rng);
/// Haar-distributed unitary via QR with phase correction.
CMatrix random_unitary(int dim, Rng& rng);
/// G G^H / Tr(G G^H) with G of shape dim x rank (rank <= 0 means full).
CMatrix random_density_matrix(int dim, Rng& rng, int rank = 0);
CMatrix random_hermitian(int dim, Rng& rng);

}  // namespace crossnorm
