#pragma once

#include "qbd2d/types.hpp"

#include <random>

namespace qbd2d::test {

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

// Dense generator with strictly positive off-diagonal rates.
inline Matrix random_irreducible_generator(std::mt19937_64& rng, Eigen::Index n) {
  Matrix g = random_matrix(rng, n, n, 0.1, 2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 0.0;
    g(i, i) = -g.row(i).sum();
  }
  return g;
}

}  // namespace qbd2d::test
