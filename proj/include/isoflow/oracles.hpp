#pragma once

// Reference computations used to cross-check the structured routes: dense
// determinants, finite-difference Jacobians and derivatives.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "isoflow/tridiagonal.hpp"

namespace isoflow::oracle {

/// det(A) by Gaussian elimination with partial pivoting; A is row-major n x n.
inline double dense_determinant(std::vector<double> A, std::size_t n) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
    if (A[piv * n + col] == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
      det = -det;
    }
    const double p = A[col * n + col];
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r * n + col] / p;
      for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
    }
  }
  return det;
}

/// det(L - lambda I) for the zero-diagonal matrix, densely.
inline double dense_char_value(const ZeroDiagMatrix& m, double lambda) {
  const std::size_t k = m.size();
  std::vector<double> A(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) A[i * k + i] = -lambda;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    A[i * k + i + 1] = m.c[i];
    A[(i + 1) * k + i] = m.c[i];
  }
  return dense_determinant(std::move(A), k);
}

/// Central-difference Jacobian of field at x: J[i][j] = d field_i / d x_j.
template <class Field>
std::vector<std::vector<double>> numerical_jacobian(Field&& field, const std::vector<double>& x, double h) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    auto xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const auto fp = field(xp);
    const auto fm = field(xm);
    for (std::size_t i = 0; i < n; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return J;
}

/// Five-point central derivative at interior index n of equally spaced samples.
inline double five_point_derivative(std::span<const double> v, std::size_t n, double h) {
  return (-v[n + 2] + 8.0 * v[n + 1] - 8.0 * v[n - 1] + v[n - 2]) / (12.0 * h);
}

}  // namespace isoflow::oracle
