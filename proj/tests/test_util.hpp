#pragma once

#include "equal/matrix_core.hpp"
#include "equal/rng.hpp"

namespace equal::testing {

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

inline DataMatrix random_data(Index n, Index p, std::uint64_t seed) {
  return make_data_matrix(random_matrix(n, p, seed));
}

inline Matrix random_symmetric(Index p, std::uint64_t seed) {
  const Matrix m = random_matrix(p, p, seed);
  return 0.5 * (m + m.transpose());
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace equal::testing
