#pragma once

// Equilibria of the Volterra flow on M_{2l+1} and of the Toda flow on J_n,
// their Morse indices from the linearized flow, and signed counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "isoflow/combinatorics.hpp"
#include "isoflow/error.hpp"
#include "isoflow/tridiagonal.hpp"

namespace isoflow {

/// lambda_1 > lambda_2 > ... > lambda_l > 0.
class SpectrumParams {
 public:
  explicit SpectrumParams(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
    for (std::size_t i = 0; i < lambdas_.size(); ++i) {
      if (!(lambdas_[i] > 0.0) || !std::isfinite(lambdas_[i]))
        throw ContractError("SpectrumParams: lambdas must be positive and finite");
      if (i > 0 && !(lambdas_[i] < lambdas_[i - 1]))
        throw ContractError("SpectrumParams: lambdas must be strictly decreasing");
    }
  }

  /// lambda_m = l + 1 - m.
  static SpectrumParams standard(int l) {
    std::vector<double> v;
    for (int m = 1; m <= l; ++m) v.push_back(static_cast<double>(l + 1 - m));
    return SpectrumParams(std::move(v));
  }

  std::size_t size() const { return lambdas_.size(); }
  double operator[](std::size_t i) const { return lambdas_[i]; }  // 0-based: lambda_{i+1}
  const std::vector<double>& values() const { return lambdas_; }

 private:
  std::vector<double> lambdas_;
};

/// Equilibrium [j, s, pi] of the Volterra flow on M_{2l+1}. The first j
/// blocks are laid out as (lambda, 0), the remaining l - j as (0, lambda);
/// block m carries (-1)^{s_m} lambda_{pi(m)}.
struct CriticalPoint {
  int j = 0;
  std::vector<int> s;    // bits, length l
  std::vector<int> pi;   // permutation of 1..l
  std::vector<double> coords;  // c_1..c_{2l}
};

inline std::vector<double> critical_point_coords(int j, const std::vector<int>& s, const std::vector<int>& pi,
                                                 const SpectrumParams& params) {
  const std::size_t l = pi.size();
  std::vector<double> c(2 * l, 0.0);
  for (std::size_t m = 0; m < l; ++m) {
    const double value = (s[m] ? -1.0 : 1.0) * params[static_cast<std::size_t>(pi[m] - 1)];
    const std::size_t pos = static_cast<int>(m) < j ? 2 * m : 2 * m + 1;
    c[pos] = value;
  }
  return c;
}

/// All (l+1) 2^l l! critical points, ordered by j, then pi lexicographically,
/// then s as a binary counter (s_l least significant).
inline std::vector<CriticalPoint> enumerate_critical_points(int l, const SpectrumParams& params) {
  if (l < 1) throw ContractError("enumerate_critical_points: l must be positive");
  if (params.size() != static_cast<std::size_t>(l))
    throw ContractError("enumerate_critical_points: need exactly l lambdas");
  const auto L = static_cast<std::size_t>(l);
  std::vector<CriticalPoint> out;
  for (int j = 0; j <= l; ++j) {
    std::vector<int> pi(L);
    std::iota(pi.begin(), pi.end(), 1);
    do {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
        std::vector<int> s(L);
        for (std::size_t m = 0; m < L; ++m) s[m] = static_cast<int>((mask >> (L - 1 - m)) & 1U);
        out.push_back({j, s, pi, critical_point_coords(j, s, pi, params)});
      }
    } while (std::next_permutation(pi.begin(), pi.end()));
  }
  return out;
}

/// Linearization eigenvalue 1/2 (c_{m+1}^2 - c_{m-1}^2) at each zero
/// coordinate m (1-based, ascending). At an equilibrium the Jacobian of the
/// Volterra field is diagonal on these directions.
inline std::vector<double> linearization_spectrum(std::span<const double> coords) {
  std::vector<double> ev;
  const std::size_t n = coords.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (coords[i] != 0.0) continue;
    const double left = i > 0 ? coords[i - 1] : 0.0;
    const double right = i + 1 < n ? coords[i + 1] : 0.0;
    ev.push_back(0.5 * (right * right - left * left));
  }
  return ev;
}

/// Number of unstable directions of the linearized Volterra flow.
inline int morse_index(std::span<const double> coords) {
  int index = 0;
  for (double e : linearization_spectrum(coords)) {
    if (e == 0.0) throw ContractError("morse_index: degenerate equilibrium (equal neighbour squares)");
    if (e > 0.0) ++index;
  }
  return index;
}

inline int morse_index(const CriticalPoint& p) { return morse_index(p.coords); }

/// Sum over all critical points of (-1)^index. The index ignores s, so only
/// the (l+1) l! sign-free points are visited and the total is scaled by 2^l.
inline int64_t morse_chi_M(int l, const SpectrumParams& params) {
  if (l < 1) throw ContractError("morse_chi_M: l must be positive");
  if (params.size() != static_cast<std::size_t>(l)) throw ContractError("morse_chi_M: need exactly l lambdas");
  const auto L = static_cast<std::size_t>(l);
  const std::vector<int> zeros(L, 0);
  int64_t signed_count = 0;
  for (int j = 0; j <= l; ++j) {
    std::vector<int> pi(L);
    std::iota(pi.begin(), pi.end(), 1);
    do {
      signed_count += morse_index(critical_point_coords(j, zeros, pi, params)) % 2 == 0 ? 1 : -1;
    } while (std::next_permutation(pi.begin(), pi.end()));
  }
  return checked::mul(signed_count, int64_t{1} << l);
}

inline int64_t morse_chi_M(int l) { return morse_chi_M(l, SpectrumParams::standard(l)); }

/// Equilibria of the Volterra flow on M_{2l} (k = 2l, 2l - 1 coordinates).
/// I_l = c_1^2 c_3^2 ... c_{2l-1}^2 != 0 forces every even coordinate to
/// vanish, leaving (+-lambda_{pi(1)}, 0, +-lambda_{pi(2)}, ..., +-lambda_{pi(l)}).
inline std::vector<std::vector<double>> enumerate_even_equilibria(const SpectrumParams& params) {
  const std::size_t l = params.size();
  if (l < 1) throw ContractError("enumerate_even_equilibria: l must be positive");
  std::vector<std::vector<double>> out;
  std::vector<int> pi(l);
  std::iota(pi.begin(), pi.end(), 1);
  do {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << l); ++mask) {
      std::vector<double> c(2 * l - 1, 0.0);
      for (std::size_t m = 0; m < l; ++m) {
        const bool negative = (mask >> (l - 1 - m)) & 1U;
        c[2 * m] = (negative ? -1.0 : 1.0) * params[static_cast<std::size_t>(pi[m] - 1)];
      }
      out.push_back(std::move(c));
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

struct TodaEquilibrium {
  std::vector<int> sigma;  // permutation of 1..n
  JacobiMatrix matrix;     // diag(mu_{sigma(1)}, ..., mu_{sigma(n)})
};

namespace detail {

inline void require_increasing(const std::vector<double>& mu) {
  if (mu.empty()) throw ContractError("Toda spectrum must be non-empty");
  for (std::size_t i = 1; i < mu.size(); ++i)
    if (!(mu[i] > mu[i - 1])) throw ContractError("Toda spectrum must be strictly increasing");
}

}  // namespace detail

/// The n! diagonal equilibria of the Toda flow, sigma in lexicographic order.
inline std::vector<TodaEquilibrium> enumerate_critical_points_toda(const std::vector<double>& spectrum) {
  detail::require_increasing(spectrum);
  const std::size_t n = spectrum.size();
  std::vector<TodaEquilibrium> out;
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 1);
  do {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = spectrum[static_cast<std::size_t>(sigma[i] - 1)];
    out.push_back({sigma, JacobiMatrix(std::move(a), std::vector<double>(n - 1, 0.0))});
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

/// #{i : mu_{sigma(i+1)} > mu_{sigma(i)}}: off-diagonal b_i grows iff a_{i+1} > a_i.
inline int morse_index_toda(const std::vector<int>& sigma, const std::vector<double>& spectrum) {
  const std::size_t n = sigma.size();
  if (n != spectrum.size()) throw ContractError("morse_index_toda: size mismatch");
  std::vector<bool> seen(n, false);
  for (int v : sigma) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v - 1)])
      throw ContractError("morse_index_toda: sigma is not a permutation");
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
  int index = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (spectrum[static_cast<std::size_t>(sigma[i + 1] - 1)] > spectrum[static_cast<std::size_t>(sigma[i] - 1)]) ++index;
  return index;
}

/// Sum over Toda equilibria of (-1)^index, for mu = (1, 2, ..., n).
inline int64_t morse_chi_J(int n) {
  if (n < 1) throw ContractError("morse_chi_J: n must be positive");
  std::vector<double> mu(static_cast<std::size_t>(n));
  std::iota(mu.begin(), mu.end(), 1.0);
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 1);
  int64_t total = 0;
  do {
    total += morse_index_toda(sigma, mu) % 2 == 0 ? 1 : -1;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

/// Betti numbers of J_n: b_k = <n, k>.
inline std::vector<int64_t> betti_J(int n) {
  if (n < 1) throw ContractError("betti_J: n must be positive");
  return eulerian_row(n);
}

struct ChiRelationReport {
  int l = 0;
  int64_t chi_M = 0;        // chi(M_{2l+1}), closed form
  int64_t chi_J = 0;        // chi(J_{l+1}), closed form
  int64_t factor = 0;       // (-1)^l 2^l
  bool relation_holds = false;  // chi_M == factor * chi_J
  bool reversed_holds = false;  // chi_J == factor * chi_M
};

inline ChiRelationReport chi_relation_check(int l) {
  if (l < 0) throw ContractError("chi_relation_check: negative l");
  ChiRelationReport r;
  r.l = l;
  r.chi_M = chi_M_closed(l);
  r.chi_J = chi_J_closed(l + 1);
  r.factor = (l % 2 == 0 ? 1 : -1) * (int64_t{1} << l);
  r.relation_holds = r.chi_M == checked::mul(r.factor, r.chi_J);
  r.reversed_holds = r.chi_J == checked::mul(r.factor, r.chi_M);
  return r;
}

}  // namespace isoflow
