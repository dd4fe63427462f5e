#pragma once

// Exact combinatorics behind the Euler characteristics of the isospectral
// varieties: Bernoulli and Eulerian numbers, the alternating Eulerian sums
// psi(n), the tanh series, and three independent routes to chi(M_{2l+1}).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "isoflow/error.hpp"
#include "isoflow/exact_rational.hpp"
#include "isoflow/power_series.hpp"

namespace isoflow {

inline int128 binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  int128 r = 1;
  // r * (n-k+i) is divisible by i after each step.
  for (int i = 1; i <= k; ++i) r = checked::mul(r, n - k + i) / i;
  return r;
}

inline int128 factorial(int n) {
  if (n < 0) throw ContractError("factorial of a negative number");
  int128 r = 1;
  for (int i = 2; i <= n; ++i) r = checked::mul(r, i);
  return r;
}

/// B_0..B_n with B_1 = -1/2, from sum_{k=0}^{m} C(m+1,k) B_k = 0.
inline std::vector<ExactRational> bernoulli_table(int n) {
  if (n < 0) throw ContractError("bernoulli: negative index");
  std::vector<ExactRational> b;
  b.reserve(static_cast<std::size_t>(n) + 1);
  try {
    b.emplace_back(1);
    for (int m = 1; m <= n; ++m) {
      ExactRational acc{0};
      for (int k = 0; k < m; ++k) {
        if (b[k].is_zero()) continue;
        acc += ExactRational(binomial(m + 1, k)) * b[k];
      }
      b.push_back(-acc / ExactRational(m + 1));
    }
  } catch (const OverflowError&) {
    throw OverflowError("bernoulli(" + std::to_string(n) + "): exceeds 128-bit rationals");
  }
  return b;
}

inline ExactRational bernoulli(int n) { return bernoulli_table(n).back(); }

/// Row n of the Eulerian triangle: <n,0>, ..., <n,max(n,1)-1>.
inline std::vector<int64_t> eulerian_row(int n) {
  if (n < 0) throw ContractError("eulerian: negative n");
  std::vector<int64_t> row{1};
  try {
    for (int m = 2; m <= n; ++m) {
      std::vector<int64_t> next(static_cast<std::size_t>(m), 0);
      for (int k = 0; k < m; ++k) {
        int64_t v = 0;
        if (k < m - 1) v = checked::mul(int64_t{k + 1}, row[k]);
        if (k >= 1) v = checked::add(v, checked::mul(int64_t{m - k}, row[k - 1]));
        next[k] = v;
      }
      row = std::move(next);
    }
  } catch (const OverflowError&) {
    throw OverflowError("eulerian(" + std::to_string(n) + ", k): exceeds 64 bits");
  }
  return row;
}

/// Number of permutations of n elements with exactly k ascents.
inline int64_t eulerian(int n, int k) {
  if (n < 0) throw ContractError("eulerian: negative n");
  const int width = n > 1 ? n : 1;
  if (k < 0 || k >= width) return 0;
  return eulerian_row(n)[static_cast<std::size_t>(k)];
}

/// psi(n) = sum_m (-1)^m <n,m>.
inline int64_t psi(int n) {
  const auto row = eulerian_row(n);
  int64_t s = 0;
  for (std::size_t m = 0; m < row.size(); ++m) s = checked::add(s, m % 2 == 0 ? row[m] : -row[m]);
  return s;
}

/// Maclaurin series of tanh z through z^order, as the exact quotient sinh/cosh.
inline PowerSeries tanh_series(std::size_t order) {
  PowerSeries sinh_z(order);
  PowerSeries cosh_z(order);
  for (std::size_t i = 0; i <= order; ++i) {
    const ExactRational term(1, factorial(static_cast<int>(i)));
    if (i % 2 == 0)
      cosh_z[i] = term;
    else
      sinh_z[i] = term;
  }
  return sinh_z / cosh_z;
}

/// chi(M_1), chi(M_3), ..., chi(M_{2 l_max + 1}) read off the exponential
/// generating function -tanh^2(2z). The l = 0 entry is 0 by convention.
inline std::vector<int64_t> chi_M_egf(int l_max) {
  if (l_max < 0) throw ContractError("chi_M_egf: negative l_max");
  const auto order = static_cast<std::size_t>(l_max);
  const PowerSeries t2 = tanh_series(order).rescaled(ExactRational(2));
  const PowerSeries egf = -(t2 * t2);
  std::vector<int64_t> chi;
  chi.reserve(order + 1);
  for (std::size_t l = 0; l <= order; ++l) {
    const ExactRational value = egf[l] * ExactRational(factorial(static_cast<int>(l)));
    if (!value.is_integer())
      throw ConsistencyError("chi_M_egf: l! * coefficient is not an integer at l=" + std::to_string(l));
    chi.push_back(value.to_int64());
  }
  return chi;
}

/// chi(M_{2l+1}) = 2^{2l+2} (2^{l+2} - 1) B_{l+2} / (l+2). Evaluates to 1 at l = 0.
inline int64_t chi_M_closed(int l) {
  if (l < 0) throw ContractError("chi_M_closed: negative l");
  const ExactRational b = bernoulli(l + 2);
  const ExactRational value = ExactRational(checked::pow2(2 * l + 2)) *
                              ExactRational(checked::pow2(l + 2) - 1) * b / ExactRational(l + 2);
  if (!value.is_integer())
    throw ConsistencyError("chi_M_closed(" + std::to_string(l) + ") = " + value.to_string());
  return value.to_int64();
}

/// chi(J_n) = (-1)^{n+1} B_{n+1} 2^{n+1} (2^{n+1} - 1) / (n+1).
inline int64_t chi_J_closed(int n) {
  if (n < 1) throw ContractError("chi_J_closed: n must be positive");
  const ExactRational b = bernoulli(n + 1);
  ExactRational value = b * ExactRational(checked::pow2(n + 1)) *
                        ExactRational(checked::pow2(n + 1) - 1) / ExactRational(n + 1);
  if (n % 2 == 0) value = -value;
  if (!value.is_integer())
    throw ConsistencyError("chi_J_closed(" + std::to_string(n) + ") = " + value.to_string());
  return value.to_int64();
}

/// chi(M_{2l+1}) = -2^l sum_{j=1}^{l-1} C(l,j) psi(j) psi(l-j); empty sum for l <= 1.
inline int64_t chi_M_combinatorial(int l) {
  if (l < 0) throw ContractError("chi_M_combinatorial: negative l");
  int128 sum = 0;
  for (int j = 1; j <= l - 1; ++j) {
    const int128 term = checked::mul(checked::mul(binomial(l, j), int128{psi(j)}), int128{psi(l - j)});
    sum = checked::add(sum, term);
  }
  return ExactRational(checked::mul(-checked::pow2(static_cast<unsigned>(l)), sum)).to_int64();
}

}  // namespace isoflow
