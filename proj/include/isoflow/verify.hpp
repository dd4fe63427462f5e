#pragma once

// Seeded verification suites behind `isoflow verify`. Each suite draws from
// its own SplitMix64 stream (seed mixed with the suite name), so results do
// not depend on which other suites run or in what order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "isoflow/combinatorics.hpp"
#include "isoflow/flows.hpp"
#include "isoflow/io.hpp"
#include "isoflow/morse.hpp"
#include "isoflow/oracles.hpp"
#include "isoflow/rng.hpp"
#include "isoflow/tridiagonal.hpp"

namespace isoflow::verify {

struct Options {
  std::vector<int> ks;  // empty: the suite's default sizes
  int samples = -1;     // negative: the suite's default count
  std::uint64_t seed = 0;
};

/// Thresholds, pinned.
namespace tol {
inline constexpr double charpoly_coeff = 1e-12;
inline constexpr double charpoly_dense = 1e-10;
inline constexpr double symmetry = 1e-9;
inline constexpr double drift = 1e-8;
inline constexpr double rate_relative = 1e-5;
inline constexpr double rate_floor = 1e-6;  // |df/dt| below this is finite-difference noise
inline constexpr double endpoint = 1e-6;
inline constexpr double toda_residual = 1e-6;
inline constexpr double mapped_spectrum = 1e-8;
inline constexpr double jacobian = 1e-6;
}  // namespace tol

/// Per-run tallies with an associative, commutative merge.
struct Tally {
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::map<std::string, double> worst;

  void record(const std::string& key, double value) {
    auto [it, inserted] = worst.try_emplace(key, value);
    if (!inserted) it->second = std::max(it->second, value);
  }

  void merge(const Tally& other) {
    runs += other.runs;
    failures += other.failures;
    for (const auto& [k, v] : other.worst) record(k, v);
  }

  json to_json() const {
    json j = {{"runs", runs}, {"failures", failures}};
    for (const auto& [k, v] : worst) j["worst_" + k] = v;
    return j;
  }
};

struct SuiteReport {
  std::string name;
  bool pass = true;
  json details = json::object();
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"charpoly", "chi",   "conservation", "lyapunov",
                                              "map",      "morse", "spectrum"};
  return names;
}

inline std::uint64_t stream_seed(std::uint64_t seed, const std::string& suite) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : suite) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return seed ^ h;
}

namespace detail {

inline std::vector<int> sizes_or(const Options& o, std::vector<int> fallback) {
  return o.ks.empty() ? fallback : o.ks;
}

inline int samples_or(const Options& o, int fallback) { return o.samples < 0 ? fallback : o.samples; }

/// Positive half of the spectrum of a zero-diagonal matrix, decreasing.
inline std::vector<double> positive_lambdas(const std::vector<double>& c) {
  const Spectrum s = eigenvalues(ZeroDiagMatrix{c}, kDiagnosticEigTol);
  const std::size_t k = c.size() + 1;
  std::vector<double> lam;
  for (std::size_t i = 0; i < k / 2; ++i) lam.push_back(s.eigenvalues[k - 1 - i]);
  return lam;
}

}  // namespace detail

/// Recurrence vs invariant expansion (coefficient-wise) vs dense determinant.
/// Relative errors are measured against sum |coeff_i| |lambda|^i.
inline SuiteReport charpoly_suite(const Options& o) {
  SplitMix64 rng(stream_seed(o.seed, "charpoly"));
  const auto ks = detail::sizes_or(o, {2, 3, 4, 5, 6, 7, 8, 9});
  Tally t;
  for (int n = 0; n < detail::samples_or(o, 1000); ++n) {
    const auto k = static_cast<std::size_t>(ks[rng.next() % ks.size()]);
    ZeroDiagMatrix m{random_volterra_state(rng, k)};
    const Polynomial rec = char_poly(m);
    const Polynomial inv = char_poly_from_invariants(invariants(m), k);
    double coeff_err = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      const double scale = std::max({std::abs(rec.coeffs[i]), std::abs(inv.coeffs[i]), 1e-300});
      coeff_err = std::max(coeff_err, std::abs(rec.coeffs[i] - inv.coeffs[i]) / scale);
    }
    double dense_err = 0.0;
    for (int q = 0; q < 10; ++q) {
      const double lambda = rng.uniform(-3.0, 3.0);
      const double d = oracle::dense_char_value(m, lambda);
      dense_err = std::max(dense_err, std::abs(rec(lambda) - d) / rec.magnitude(lambda));
      dense_err = std::max(dense_err, std::abs(inv(lambda) - d) / inv.magnitude(lambda));
    }
    ++t.runs;
    if (coeff_err >= tol::charpoly_coeff || dense_err >= tol::charpoly_dense) ++t.failures;
    t.record("coefficient_relative_error", coeff_err);
    t.record("dense_relative_error", dense_err);
  }
  return {"charpoly", t.failures == 0, t.to_json()};
}

inline SuiteReport spectrum_suite(const Options& o) {
  SplitMix64 rng(stream_seed(o.seed, "spectrum"));
  const auto ks = detail::sizes_or(o, {2, 3, 4, 5, 6, 7, 8, 9});
  Tally t;
  for (int n = 0; n < detail::samples_or(o, 1000); ++n) {
    const auto k = static_cast<std::size_t>(ks[rng.next() % ks.size()]);
    ZeroDiagMatrix m{random_volterra_state(rng, k)};
    const Spectrum s = eigenvalues(m, 1e-12);
    const SymmetryReport sym = spectrum_symmetry_check(s, k, tol::symmetry);
    const Polynomial p = char_poly(m);
    const Polynomial dp = p.derivative();
    double newton = 0.0;  // |p / p'|, the distance to the nearest root to first order
    for (double ev : s.eigenvalues) newton = std::max(newton, std::abs(p(ev) / dp(ev)));
    ++t.runs;
    if (!sym.ok() || newton > 1e-10) ++t.failures;
    t.record("pair_residual", sym.worst_pair_residual);
    t.record("newton_step", newton);
  }
  return {"spectrum", t.failures == 0, t.to_json()};
}

inline SuiteReport conservation_suite(const Options& o) {
  SplitMix64 rng(stream_seed(o.seed, "conservation"));
  const IntegratorConfig cfg{1e-2, 1e-10, 20.0, 1e-2};
  json per_k = json::object();
  bool pass = true;
  for (int k : detail::sizes_or(o, {3, 5, 7})) {
    Tally t;
    for (int n = 0; n < detail::samples_or(o, 100); ++n) {
      const auto c0 = random_volterra_state(rng, static_cast<std::size_t>(k));
      const TrajectoryRecord rec = volterra_trajectory(c0, cfg);
      const double sd = *std::max_element(rec.spectrum_drift.begin(), rec.spectrum_drift.end());
      const double id = *std::max_element(rec.invariant_drift.begin(), rec.invariant_drift.end());
      ++t.runs;
      if (sd >= tol::drift || id >= tol::drift) ++t.failures;
      t.record("spectrum_drift", sd);
      t.record("invariant_drift", id);
    }
    pass = pass && t.failures == 0;
    per_k[std::to_string(k)] = t.to_json();
  }
  return {"conservation", pass, {{"k", per_k}}};
}

/// Distance (max-norm) from c to the nearest index-0 critical point for its
/// own spectrum, and whether that point is the nearest critical point overall.
struct EndpointCheck {
  double distance_index0 = INFINITY;
  double distance_any = INFINITY;
  int nearest_index = -1;
};

inline EndpointCheck endpoint_check(const std::vector<double>& endpoint, const std::vector<double>& c0) {
  EndpointCheck r;
  const std::size_t k = c0.size() + 1;
  const int l = static_cast<int>(k / 2);
  const SpectrumParams params(detail::positive_lambdas(c0));
  for (const CriticalPoint& p : enumerate_critical_points(l, params)) {
    double d = 0.0;
    for (std::size_t i = 0; i < endpoint.size(); ++i) d = std::max(d, std::abs(endpoint[i] - p.coords[i]));
    const int index = morse_index(p);
    if (d < r.distance_any) {
      r.distance_any = d;
      r.nearest_index = index;
    }
    if (index == 0) r.distance_index0 = std::min(r.distance_index0, d);
  }
  return r;
}

/// f non-increasing and df/dt matching the exact rate on [0, 20]; the
/// endpoint at t = 100 near the index-0 equilibrium (odd k).
inline SuiteReport lyapunov_suite(const Options& o) {
  SplitMix64 rng(stream_seed(o.seed, "lyapunov"));
  const IntegratorConfig cfg{1e-2, 1e-10, 20.0, 1e-2};
  const IntegratorConfig long_cfg{1e-2, 1e-10, 100.0, 1.0};
  json per_k = json::object();
  bool pass = true;
  for (int k : detail::sizes_or(o, {3, 5, 7})) {
    Tally t;
    std::size_t endpoint_failures = 0;
    for (int n = 0; n < detail::samples_or(o, 100); ++n) {
      const auto c0 = random_volterra_state(rng, static_cast<std::size_t>(k));
      const TrajectoryRecord rec = volterra_trajectory(c0, cfg);
      double increase = 0.0;
      for (std::size_t i = 1; i < rec.f_values.size(); ++i)
        increase = std::max(increase, rec.f_values[i] - rec.f_values[i - 1]);
      double rate_err = 0.0;
      for (std::size_t i = 2; i + 2 < rec.times.size(); ++i) {
        const double rate = lyapunov_rate(rec.states[i]);
        if (std::abs(rate) < tol::rate_floor) continue;
        const double fd = oracle::five_point_derivative(rec.f_values, i, cfg.sample_interval);
        rate_err = std::max(rate_err, std::abs(fd - rate) / std::abs(rate));
      }
      bool ok = increase <= cfg.error_tol && rate_err <= tol::rate_relative;
      if (k % 2 == 1) {
        const auto end = integrate(volterra_field(), c0, long_cfg).states.back();
        const EndpointCheck e = endpoint_check(end, c0);
        t.record("endpoint_distance", e.distance_index0);
        if (e.distance_index0 > tol::endpoint) {
          ++endpoint_failures;
          ok = false;
        }
      }
      ++t.runs;
      if (!ok) ++t.failures;
      t.record("f_increase", increase);
      t.record("rate_relative_error", rate_err);
    }
    pass = pass && t.failures == 0;
    json j = t.to_json();
    j["endpoint_failures"] = endpoint_failures;
    per_k[std::to_string(k)] = j;
  }
  return {"lyapunov", pass, {{"k", per_k}}};
}

/// Even k: sign vector constant, mapped path solves the Toda equations,
/// mapped spectrum is {lambda^2 / 2}.
inline SuiteReport map_suite(const Options& o) {
  SplitMix64 rng(stream_seed(o.seed, "map"));
  const IntegratorConfig cfg{1e-3, 1e-12, 2.0, 1e-3};
  json per_k = json::object();
  bool pass = true;
  for (int k : detail::sizes_or(o, {2, 4, 6})) {
    if (k % 2 != 0) throw ContractError("map suite needs even k, got " + std::to_string(k));
    Tally t;
    for (int n = 0; n < detail::samples_or(o, 50); ++n) {
      const auto c0 = random_volterra_state(rng, static_cast<std::size_t>(k));
      const TrajectoryRecord rec = integrate(volterra_field(), c0, cfg);
      const auto sig0 = component_signature(c0);
      std::size_t sign_changes = 0;
      std::vector<JacobiMatrix> mapped;
      mapped.reserve(rec.states.size());
      for (const auto& c : rec.states) {
        if (component_signature(c) != sig0) ++sign_changes;
        mapped.push_back(volterra_to_toda(c));
      }
      auto lam = detail::positive_lambdas(c0);
      std::vector<double> target;
      for (double x : lam) target.push_back(0.5 * x * x);
      std::sort(target.begin(), target.end());
      double spec_err = 0.0;
      for (const auto& J : mapped) {
        const Spectrum s = eigenvalues(J, kDiagnosticEigTol);
        for (std::size_t i = 0; i < target.size(); ++i)
          spec_err = std::max(spec_err, std::abs(s.eigenvalues[i] - target[i]));
      }
      const std::size_t l = static_cast<std::size_t>(k / 2);
      double residual = 0.0;
      std::vector<double> series(rec.times.size());
      for (std::size_t comp = 0; comp < 2 * l - 1; ++comp) {
        for (std::size_t s = 0; s < mapped.size(); ++s)
          series[s] = comp < l ? mapped[s].a[comp] : mapped[s].b[comp - l];
        for (std::size_t s = 2; s + 2 < mapped.size(); ++s) {
          const TodaState d = toda_rhs(mapped[s].a, mapped[s].b);
          const double exact = comp < l ? d.a[comp] : d.b[comp - l];
          residual = std::max(residual,
                              std::abs(oracle::five_point_derivative(series, s, cfg.sample_interval) - exact));
        }
      }
      ++t.runs;
      if (sign_changes > 0 || residual >= tol::toda_residual || spec_err >= tol::mapped_spectrum) ++t.failures;
      t.record("sign_changes", static_cast<double>(sign_changes));
      t.record("toda_residual", residual);
      t.record("mapped_spectrum_error", spec_err);
    }
    pass = pass && t.failures == 0;
    per_k[std::to_string(k)] = t.to_json();
  }
  return {"map", pass, {{"k", per_k}}};
}

/// Strictly decreasing positive spectrum with gaps of at least 1e-2.
inline SpectrumParams random_spectrum(SplitMix64& rng, int l) {
  for (;;) {
    std::vector<double> v;
    for (int i = 0; i < l; ++i) v.push_back(rng.uniform(0.1, 2.0));
    std::sort(v.rbegin(), v.rend());
    bool spaced = true;
    for (std::size_t i = 1; i < v.size(); ++i) spaced = spaced && v[i - 1] - v[i] >= 1e-2;
    if (spaced) return SpectrumParams(std::move(v));
  }
}

struct JacobianCheck {
  double eigen_error = 0.0;     // |diag - 1/2 (c_{m+1}^2 - c_{m-1}^2)|
  double off_diagonal = 0.0;    // largest off-diagonal entry of the zero-coordinate block
  int positive = 0;             // positive eigenvalues of the block
};

/// Finite-difference Jacobian of the Volterra field restricted to the zero
/// coordinates of an equilibrium. The block is diagonal up to round-off, so
/// its eigenvalues are its diagonal entries.
inline JacobianCheck jacobian_check(const std::vector<double>& coords) {
  JacobianCheck r;
  const auto J = oracle::numerical_jacobian(volterra_field(), coords, 1e-5);
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == 0.0) zeros.push_back(i);
  const auto expected = linearization_spectrum(coords);
  for (std::size_t a = 0; a < zeros.size(); ++a) {
    for (std::size_t b = 0; b < zeros.size(); ++b) {
      const double v = J[zeros[a]][zeros[b]];
      if (a == b) {
        r.eigen_error = std::max(r.eigen_error, std::abs(v - expected[a]));
        if (v > 0.0) ++r.positive;
      } else {
        r.off_diagonal = std::max(r.off_diagonal, std::abs(v));
      }
    }
  }
  return r;
}

inline SuiteReport morse_suite(const Options& o) {
  SplitMix64 rng(stream_seed(o.seed, "morse"));
  json details = json::object();
  bool pass = true;

  json counts = json::array();
  for (int l = 1; l <= 8; ++l) {
    const int64_t morse = morse_chi_M(l);
    const int64_t closed = chi_M_closed(l);
    pass = pass && morse == closed;
    counts.push_back({{"l", l}, {"morse", morse}, {"closed", closed}, {"agree", morse == closed}});
  }
  details["chi_M"] = counts;

  std::size_t s_mismatches = 0;
  for (int l = 1; l <= 4; ++l) {
    const auto params = SpectrumParams::standard(l);
    for (const auto& p : enumerate_critical_points(l, params)) {
      const std::vector<int> zeros(p.s.size(), 0);
      if (morse_index(p) != morse_index(critical_point_coords(p.j, zeros, p.pi, params))) ++s_mismatches;
    }
  }
  pass = pass && s_mismatches == 0;
  details["sign_independence_mismatches"] = s_mismatches;

  Tally jac;
  for (int l = 1; l <= 3; ++l) {
    for (int n = 0; n < detail::samples_or(o, 5); ++n) {
      const SpectrumParams params = random_spectrum(rng, l);
      for (const auto& p : enumerate_critical_points(l, params)) {
        const JacobianCheck c = jacobian_check(p.coords);
        ++jac.runs;
        if (c.eigen_error > tol::jacobian || c.off_diagonal > tol::jacobian || c.positive != morse_index(p))
          ++jac.failures;
        jac.record("eigenvalue_error", c.eigen_error);
        jac.record("off_diagonal", c.off_diagonal);
      }
    }
  }
  pass = pass && jac.failures == 0;
  details["jacobian"] = jac.to_json();

  json toda = json::array();
  for (int n = 1; n <= 8; ++n) {
    const int64_t m = morse_chi_J(n), c = chi_J_closed(n), p = psi(n);
    const bool agree = m == c && c == p;
    pass = pass && agree;
    toda.push_back({{"n", n}, {"morse", m}, {"closed", c}, {"psi", p}, {"agree", agree}});
  }
  details["chi_J"] = toda;
  return {"morse", pass, details};
}

inline SuiteReport chi_suite(const Options&) {
  json details = json::object();
  bool pass = true;
  const auto egf = chi_M_egf(10);
  json rows = json::array();
  for (int l = 0; l <= 10; ++l) {
    const int64_t closed = chi_M_closed(l), comb = chi_M_combinatorial(l), e = egf[static_cast<std::size_t>(l)];
    json row = {{"l", l}, {"closed", closed}, {"egf", e}, {"combinatorial", comb}};
    if (l == 0) {
      // chi(M_1) is 0 by the generating-function convention; the closed form gives 1.
      row["agree"] = e == 0 && comb == 0 && closed == 1;
      row["note"] = "convention gap: closed form 1, generating function 0";
    } else {
      row["agree"] = closed == e && e == comb;
    }
    pass = pass && row["agree"].get<bool>();
    rows.push_back(row);
  }
  details["chi_M"] = rows;

  json jrows = json::array();
  for (int n = 1; n <= 12; ++n) {
    int64_t alternating = 0;
    for (int k = 0; k < std::max(n, 1); ++k) alternating += (k % 2 == 0 ? 1 : -1) * eulerian(n, k);
    const int64_t closed = chi_J_closed(n), p = psi(n);
    const bool agree = closed == p && p == alternating;
    pass = pass && agree;
    jrows.push_back({{"n", n}, {"closed", closed}, {"psi", p}, {"eulerian_alternating", alternating}, {"agree", agree}});
  }
  details["chi_J"] = jrows;

  json rel = json::array();
  for (int l = 0; l <= 10; ++l) {
    const ChiRelationReport r = chi_relation_check(l);
    pass = pass && r.relation_holds;
    rel.push_back({{"l", l}, {"chi_M", r.chi_M}, {"chi_J", r.chi_J}, {"factor", r.factor},
                   {"relation_holds", r.relation_holds}, {"reversed_holds", r.reversed_holds}});
  }
  details["relation"] = rel;
  return {"chi", pass, details};
}

inline SuiteReport run_suite(const std::string& name, const Options& o) {
  static const std::map<std::string, std::function<SuiteReport(const Options&)>> table{
      {"charpoly", charpoly_suite}, {"chi", chi_suite},     {"conservation", conservation_suite},
      {"lyapunov", lyapunov_suite}, {"map", map_suite},     {"morse", morse_suite},
      {"spectrum", spectrum_suite}};
  const auto it = table.find(name);
  if (it == table.end()) throw ContractError("unknown suite: " + name);
  return it->second(o);
}

/// Runs the suites concurrently and merges their reports ordered by name.
inline json run(std::vector<std::string> suites, const Options& o) {
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ContractError("unknown suite: " + s);
  std::sort(suites.begin(), suites.end());
  suites.erase(std::unique(suites.begin(), suites.end()), suites.end());

  std::vector<std::future<SuiteReport>> futures;
  for (const auto& s : suites) futures.push_back(std::async(std::launch::async, run_suite, s, o));

  json results = json::object();
  bool pass = true;
  for (auto& f : futures) {
    SuiteReport r = f.get();
    pass = pass && r.pass;
    r.details["pass"] = r.pass;
    results[r.name] = std::move(r.details);
  }
  return {{"command", "verify"}, {"seed", o.seed}, {"results", results}, {"pass", pass}};
}

}  // namespace isoflow::verify
