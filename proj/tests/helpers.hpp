#pragma once

#include "crossnorm/linalg.hpp"

namespace crossnorm::testing {

inline CVector ket(int dim, int i) {
  CVector v = CVector::Zero(dim);
  v(i) = 1.0;
  return v;
}

inline CMatrix ketbra(int dim, int i, int j) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace crossnorm::testing
