#pragma once

#include "qbd2d/types.hpp"

namespace qbd2d {

// A ⊗ B.
inline Matrix kron_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename... Rest>
Matrix kron_product(const Matrix& a, const Matrix& b, const Rest&... rest) {
  return kron_product(kron_product(a, b), rest...);
}

// A ⊕ B = A ⊗ I + I ⊗ B.
inline Matrix kron_sum(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw InvalidArgument("kron_sum requires square matrices");
  return kron_product(a, Matrix::Identity(b.rows(), b.rows())) +
         kron_product(Matrix::Identity(a.rows(), a.rows()), b);
}

template <typename... Rest>
Matrix kron_sum(const Matrix& a, const Matrix& b, const Rest&... rest) {
  return kron_sum(kron_sum(a, b), rest...);
}

}  // namespace qbd2d
