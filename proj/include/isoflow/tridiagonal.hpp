#pragma once

// Zero-diagonal and general Jacobi matrices: characteristic polynomials,
// the conserved sums I_m over totally disconnected index sets, and spectra
// by Sturm-sequence bisection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isoflow/error.hpp"

namespace isoflow {

/// k x k symmetric matrix with zero diagonal and off-diagonal c_1..c_{k-1}.
/// c_0 = c_k = 0 is implied everywhere.
struct ZeroDiagMatrix {
  std::vector<double> c;

  std::size_t size() const { return c.size() + 1; }
};

/// Real symmetric tridiagonal matrix: diagonal a_1..a_n, off-diagonal b_1..b_{n-1}.
struct JacobiMatrix {
  std::vector<double> a;
  std::vector<double> b;

  JacobiMatrix() = default;
  JacobiMatrix(std::vector<double> diag, std::vector<double> off) : a(std::move(diag)), b(std::move(off)) {
    if (a.empty() || b.size() + 1 != a.size())
      throw ContractError("JacobiMatrix: need n >= 1 diagonal and n-1 off-diagonal entries");
  }

  std::size_t size() const { return a.size(); }
};

inline JacobiMatrix to_jacobi(const ZeroDiagMatrix& m) {
  return {std::vector<double>(m.size(), 0.0), m.c};
}

/// Eigenvalues sorted ascending.
struct Spectrum {
  std::vector<double> eigenvalues;
};

/// (I_0, ..., I_{floor(k/2)}) with I_0 = 1.
struct InvariantVector {
  std::vector<double> values;
};

/// Coefficients in the monomial basis, coeffs[i] multiplying lambda^i.
struct Polynomial {
  std::vector<double> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  double operator()(double x) const {
    double r = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
    return r;
  }

  /// sum |coeff_i| |x|^i, the natural scale for relative comparisons.
  double magnitude(double x) const {
    double r = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * std::abs(x) + std::abs(*it);
    return r;
  }

  Polynomial derivative() const {
    Polynomial d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(static_cast<double>(i) * coeffs[i]);
    return d;
  }
};

namespace detail {

inline void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw ContractError(std::string(what) + ": non-finite entry");
}

}  // namespace detail

/// det(L - lambda I) via P_N = -lambda P_{N-1} - c_{N-1}^2 P_{N-2}, P_0 = 1, P_1 = -lambda.
inline Polynomial char_poly(const ZeroDiagMatrix& m) {
  detail::require_finite(m.c, "char_poly");
  const std::size_t k = m.size();
  std::vector<double> prev{1.0};         // P_0
  std::vector<double> cur{0.0, -1.0};    // P_1
  for (std::size_t n = 2; n <= k; ++n) {
    const double c2 = m.c[n - 2] * m.c[n - 2];
    std::vector<double> next(n + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] -= cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= c2 * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {std::move(cur)};
}

/// Subsets of {1..n} of the given size with no two consecutive members, in
/// lexicographic order. There are C(n - size + 1, size) of them.
inline std::vector<std::vector<int>> totally_disconnected_subsets(int n, int size) {
  std::vector<std::vector<int>> out;
  if (size < 0 || n < 0) return out;
  std::vector<int> current;
  auto rec = [&](auto&& self, int next_min) -> void {
    if (static_cast<int>(current.size()) == size) {
      out.push_back(current);
      return;
    }
    const int remaining = size - static_cast<int>(current.size());
    // Leave room for the remaining members with gaps of at least two.
    for (int i = next_min; i + 2 * (remaining - 1) <= n; ++i) {
      current.push_back(i);
      self(self, i + 2);
      current.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

/// I_m = sum over totally disconnected m-subsets of prod c_i^2.
inline InvariantVector invariants(const ZeroDiagMatrix& m) {
  const int n = static_cast<int>(m.c.size());
  const std::size_t half = m.size() / 2;
  std::vector<double> I(half + 1, 0.0);
  // Walks the same index sets as totally_disconnected_subsets without storing them.
  auto rec = [&](auto&& self, int next_min, std::size_t depth, double product) -> void {
    I[depth] += product;
    if (depth == half) return;
    for (int i = next_min; i <= n; ++i) {
      const double ci = m.c[static_cast<std::size_t>(i - 1)];
      self(self, i + 2, depth + 1, product * ci * ci);
    }
  };
  rec(rec, 1, 0, 1.0);
  return {std::move(I)};
}

/// P_{2l} = sum (-1)^i lambda^{2l-2i} I_i and P_{2l+1} = sum (-1)^{i+1} lambda^{2l+1-2i} I_i.
inline Polynomial char_poly_from_invariants(const InvariantVector& iv, std::size_t k) {
  if (k < 1) throw ContractError("char_poly_from_invariants: k must be positive");
  if (iv.values.size() != k / 2 + 1)
    throw ContractError("char_poly_from_invariants: expected " + std::to_string(k / 2 + 1) +
                        " invariants for k=" + std::to_string(k) + ", got " +
                        std::to_string(iv.values.size()));
  std::vector<double> coeffs(k + 1, 0.0);
  const bool odd = k % 2 == 1;
  for (std::size_t i = 0; i < iv.values.size(); ++i) {
    const double sign = ((i + (odd ? 1 : 0)) % 2 == 0) ? 1.0 : -1.0;
    coeffs[k - 2 * i] = sign * iv.values[i];
  }
  return {std::move(coeffs)};
}

namespace detail {

/// Number of eigenvalues strictly below x, from the signs of the pivots of
/// the LDL^T factorization of T - xI. An exactly-zero pivot is replaced by
/// -pivmin.
inline std::size_t sturm_count(std::span<const double> a, std::span<const double> b, double x,
                               double pivmin) {
  std::size_t count = 0;
  double q = a[0] - x;
  if (q == 0.0) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < a.size(); ++i) {
    q = a[i] - x - b[i - 1] * b[i - 1] / q;
    if (q == 0.0) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace detail

/// All eigenvalues of a symmetric tridiagonal matrix to absolute accuracy tol
/// (or the Sturm count's own resolution, whichever is coarser).
inline Spectrum eigenvalues(const JacobiMatrix& m, double tol) {
  if (!(tol > 0.0)) throw ContractError("eigenvalues: tol must be positive");
  detail::require_finite(m.a, "eigenvalues");
  detail::require_finite(m.b, "eigenvalues");
  const std::size_t n = m.size();
  if (n == 0) return {};

  // Gershgorin interval.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(m.b[i - 1]) : 0.0) + (i + 1 < n ? std::abs(m.b[i]) : 0.0);
    lo = std::min(lo, m.a[i] - r);
    hi = std::max(hi, m.a[i] + r);
    norm = std::max(norm, std::abs(m.a[i]) + r);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double pivmin = std::max(eps * norm, std::numeric_limits<double>::min());
  const double pad = 2.0 * eps * norm + pivmin;
  lo -= pad;
  hi += pad;

  Spectrum s;
  s.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double left = lo;
    double right = hi;
    while (right - left > tol) {
      const double mid = 0.5 * (left + right);
      if (mid <= left || mid >= right) break;
      if (detail::sturm_count(m.a, m.b, mid, pivmin) > i)
        right = mid;
      else
        left = mid;
    }
    s.eigenvalues[i] = 0.5 * (left + right);
  }
  return s;
}

inline Spectrum eigenvalues(const ZeroDiagMatrix& m, double tol) { return eigenvalues(to_jacobi(m), tol); }

struct SymmetryReport {
  bool symmetric = false;       // closed under negation within tol
  bool zero_parity_ok = false;  // contains 0 iff k is odd
  double worst_pair_residual = 0.0;

  bool ok() const { return symmetric && zero_parity_ok; }
};

/// Checks the spectrum shape of a zero-diagonal matrix: +-lambda pairs, plus
/// a single 0 when k is odd.
inline SymmetryReport spectrum_symmetry_check(const Spectrum& s, std::size_t k, double tol) {
  SymmetryReport r;
  const auto& ev = s.eigenvalues;
  const std::size_t n = ev.size();
  for (std::size_t i = 0; i < n; ++i)
    r.worst_pair_residual = std::max(r.worst_pair_residual, std::abs(ev[i] + ev[n - 1 - i]));
  r.symmetric = n == k && r.worst_pair_residual <= tol;
  const bool has_zero = std::any_of(ev.begin(), ev.end(), [&](double x) { return std::abs(x) <= tol; });
  r.zero_parity_ok = has_zero == (k % 2 == 1);
  return r;
}

}  // namespace isoflow
