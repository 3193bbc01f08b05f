#include "crossnorm/random.hpp"

namespace crossnorm {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CMatrix random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

CVector random_unit_vector(int dim, Rng& rng) {
  CVector v = random_gaussian(dim, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_unitary(int dim, Rng& rng) {
  const CMatrix g = random_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

CMatrix random_density_matrix(int dim, Rng& rng, int rank) {
  const int cols = rank > 0 ? rank : dim;
  const CMatrix g = random_gaussian(dim, cols, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

CMatrix random_hermitian(int dim, Rng& rng) {
  const CMatrix g = random_gaussian(dim, dim, rng);
  return hermitian_part(g);
}

}  // namespace crossnorm
