#pragma once

#include <vector>

#include "paralab/numeric.hpp"

namespace paralab {

// Dense row-major complex matrix; sizes here are tiny (tens of rows, < 20 columns).
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<Complex> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r * c)) {}
  Complex& operator()(int i, int j) { return a[static_cast<size_t>(i * cols + j)]; }
  const Complex& operator()(int i, int j) const { return a[static_cast<size_t>(i * cols + j)]; }
};

struct LeastSquares {
  std::vector<Complex> x;
  Real residual_norm;
  Real condition_number;        // of the column-equilibrated design; 0 when not requested
  std::vector<Real> sensitivity;  // row norms of R^{-1}: |dx_i| <= sensitivity_i * |db|
};

// min |A x - b|_2 via Householder QR on the column-equilibrated matrix.
// Throws FitError when the design is numerically rank deficient.
LeastSquares least_squares(const Matrix& A, const std::vector<Complex>& b, bool condition = true);

// Singular values (descending) by one-sided Jacobi.
std::vector<Real> singular_values(const Matrix& A);

}  // namespace paralab
