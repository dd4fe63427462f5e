#pragma once

// The open Volterra (Kac-van Moerbeke) and Toda flows, the Lyapunov function
// f(L) = tr K L^2 of the Volterra flow, and the map carrying even-size
// Volterra solutions to Toda solutions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isoflow/error.hpp"
#include "isoflow/integrator.hpp"
#include "isoflow/tridiagonal.hpp"

namespace isoflow {

/// c_i' = 1/2 c_i (c_{i+1}^2 - c_{i-1}^2), c_0 = c_k = 0. Here k = c.size() + 1.
inline std::vector<double> volterra_rhs(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? c[i - 1] : 0.0;
    const double right = i + 1 < n ? c[i + 1] : 0.0;
    out[i] = 0.5 * c[i] * (right * right - left * left);
  }
  return out;
}

struct TodaState {
  std::vector<double> a;
  std::vector<double> b;
};

/// a_i' = 2(b_i^2 - b_{i-1}^2), b_i' = b_i (a_{i+1} - a_i), b_0 = b_n = 0.
inline TodaState toda_rhs(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() + 1 != n) throw ContractError("toda_rhs: need lengths n and n-1");
  TodaState d{std::vector<double>(n), std::vector<double>(n - 1)};
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? b[i] : 0.0;
    const double left = i > 0 ? b[i - 1] : 0.0;
    d.a[i] = 2.0 * (right * right - left * left);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) d.b[i] = b[i] * (a[i + 1] - a[i]);
  return d;
}

/// Toda field on the packed state (a_1..a_n, b_1..b_{n-1}).
inline auto toda_field(std::size_t n) {
  return [n](const std::vector<double>& y) {
    const std::span<const double> all(y);
    const TodaState d = toda_rhs(all.first(n), all.subspan(n));
    std::vector<double> out = d.a;
    out.insert(out.end(), d.b.begin(), d.b.end());
    return out;
  };
}

inline auto volterra_field() {
  return [](const std::vector<double>& c) { return volterra_rhs(c); };
}

/// f = tr K L^2 with K = 1/4 diag(1, 2, ...), which is 1/4 sum (2i+1) c_i^2.
inline double lyapunov_f(std::span<const double> c) {
  double f = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) f += static_cast<double>(2 * (i + 1) + 1) * c[i] * c[i];
  return 0.25 * f;
}

/// df/dt along the Volterra flow: -1/2 sum c_i^2 c_{i+1}^2.
inline double lyapunov_rate(std::span<const double> c) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) s += c[i] * c[i] * c[i + 1] * c[i + 1];
  return -0.5 * s;
}

/// Maps c of size k = 2l (so c has 2l-1 entries; c_{2l} = 0) to the l x l
/// Jacobi matrix with
///   a_i = 1/2 (c_{2i-2}^2 + c_{2i-1}^2),  b_i = -1/2 c_{2i-1} c_{2i}.
/// Its spectrum is {lambda_i^2 / 2}. Taking instead
/// a_i = 1/2 c_i (c_{i+1}^2 - c_{i-1}^2), which is the Volterra vector field
/// itself, does not map solutions to solutions.
inline JacobiMatrix volterra_to_toda(std::span<const double> c) {
  if (c.size() % 2 == 0) throw ContractError("volterra_to_toda: matrix size k must be even");
  const std::size_t l = (c.size() + 1) / 2;
  auto at = [&](std::size_t i) { return i >= 1 && i <= c.size() ? c[i - 1] : 0.0; };  // 1-based
  std::vector<double> a(l), b(l - 1);
  for (std::size_t i = 1; i <= l; ++i) {
    const double p = at(2 * i - 2), q = at(2 * i - 1);
    a[i - 1] = 0.5 * (p * p + q * q);
  }
  for (std::size_t i = 1; i < l; ++i) b[i - 1] = -0.5 * at(2 * i - 1) * at(2 * i);
  return {std::move(a), std::move(b)};
}

/// (sgn c_1, sgn c_3, ..., sgn c_{2l-1}) as +1/-1; these label the components of M_{2l}.
inline std::vector<int> component_signature(std::span<const double> c) {
  if (c.size() % 2 == 0) throw ContractError("component_signature: matrix size k must be even");
  std::vector<int> sig;
  for (std::size_t i = 0; i < c.size(); i += 2) {
    if (c[i] == 0.0)
      throw DegeneratePointError("component_signature: c_" + std::to_string(i + 1) + " is zero");
    sig.push_back(c[i] > 0.0 ? 1 : -1);
  }
  return sig;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Volterra quiescence threshold: two consecutive samples below it count as converged.
inline constexpr double kEquilibriumThreshold = 1e-10;
/// Bisection accuracy used for drift diagnostics.
inline constexpr double kDiagnosticEigTol = 1e-13;

/// Integrates the Volterra flow from c0 and fills f, spectrum drift
/// max_i |lambda_i(t) - lambda_i(0)|, invariant drift max_m |I_m(t) - I_m(0)|,
/// and the convergence time.
inline TrajectoryRecord volterra_trajectory(const std::vector<double>& c0, const IntegratorConfig& cfg,
                                            StepMethod method = StepMethod::dormand_prince) {
  TrajectoryRecord rec = integrate(volterra_field(), c0, cfg, method);
  const Spectrum s0 = eigenvalues(ZeroDiagMatrix{c0}, kDiagnosticEigTol);
  const InvariantVector i0 = invariants(ZeroDiagMatrix{c0});
  int quiet = 0;
  for (std::size_t n = 0; n < rec.states.size(); ++n) {
    const auto& c = rec.states[n];
    rec.f_values.push_back(lyapunov_f(c));
    const Spectrum s = eigenvalues(ZeroDiagMatrix{c}, kDiagnosticEigTol);
    double sd = 0.0;
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
      sd = std::max(sd, std::abs(s.eigenvalues[i] - s0.eigenvalues[i]));
    rec.spectrum_drift.push_back(sd);
    const InvariantVector iv = invariants(ZeroDiagMatrix{c});
    double id = 0.0;
    for (std::size_t m = 0; m < iv.values.size(); ++m) id = std::max(id, std::abs(iv.values[m] - i0.values[m]));
    rec.invariant_drift.push_back(id);

    if (max_abs(volterra_rhs(c)) < kEquilibriumThreshold) {
      if (++quiet == 2 && !rec.converged_at) rec.converged_at = rec.times[n - 1];
    } else {
      quiet = 0;
    }
  }
  return rec;
}

}  // namespace isoflow
