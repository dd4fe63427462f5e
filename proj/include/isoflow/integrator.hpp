#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoflow/error.hpp"

namespace isoflow {

struct IntegratorConfig {
  double initial_step = 1e-2;
  double error_tol = 1e-10;  // per-step local error, mixed absolute/relative
  double t_final = 20.0;
  double sample_interval = 1e-2;

  void validate() const {
    if (!(initial_step > 0.0) || !(error_tol > 0.0) || !(t_final > 0.0) || !(sample_interval > 0.0))
      throw ContractError("IntegratorConfig: all fields must be positive");
    if (sample_interval > t_final) throw ContractError("IntegratorConfig: sample_interval exceeds t_final");
  }

  /// Sample times 0, h, 2h, ... and t_final itself when it is not a multiple of h.
  std::vector<double> sample_times() const {
    std::vector<double> t;
    const auto n = static_cast<std::size_t>(std::floor(t_final / sample_interval + 1e-9));
    t.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) t.push_back(static_cast<double>(i) * sample_interval);
    if (t_final - t.back() > 1e-9 * sample_interval) t.push_back(t_final);
    return t;
  }
};

enum class StepMethod {
  dormand_prince,  // adaptive embedded RK 5(4)
  rk4,             // classical fixed step of size initial_step
};

/// Sampled trajectory. Flow-specific diagnostics (f, drifts) are filled by
/// the Volterra driver and left empty by the generic integrator.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<double> f_values;
  std::vector<double> spectrum_drift;
  std::vector<double> invariant_drift;

  std::optional<double> converged_at;  // first of two consecutive quiet samples
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

namespace detail {

using State = std::vector<double>;

inline void axpy(State& out, const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  out = y;
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * w * (*k)[i];
  }
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // b - b*, the embedded error weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Integrates the autonomous system y' = field(y) from t = 0 to cfg.t_final,
/// recording the state at every sample time. Steps are clipped to land on
/// sample times exactly, so the result depends only on the inputs.
template <class Field>
TrajectoryRecord integrate(Field&& field, std::vector<double> initial, const IntegratorConfig& cfg,
                           StepMethod method = StepMethod::dormand_prince) {
  cfg.validate();
  for (double x : initial)
    if (!std::isfinite(x)) throw ContractError("integrate: non-finite initial state");

  using detail::State;
  using DP = detail::DormandPrince;

  const std::vector<double> samples = cfg.sample_times();
  TrajectoryRecord rec;
  rec.times.reserve(samples.size());
  rec.states.reserve(samples.size());
  rec.times.push_back(0.0);
  rec.states.push_back(initial);

  State y = std::move(initial);
  const std::size_t dim = y.size();
  State k1, k2, k3, k4, k5, k6, k7, tmp, y_new(dim);
  double t = 0.0;
  double h = cfg.initial_step;
  std::size_t next = 1;

  if (method == StepMethod::rk4) {
    while (next < samples.size()) {
      const double target = samples[next];
      const double step = std::min(cfg.initial_step, target - t);
      k1 = field(y);
      detail::axpy(tmp, y, step, {{0.5, &k1}});
      k2 = field(tmp);
      detail::axpy(tmp, y, step, {{0.5, &k2}});
      k3 = field(tmp);
      detail::axpy(tmp, y, step, {{1.0, &k3}});
      k4 = field(tmp);
      for (std::size_t i = 0; i < dim; ++i) y[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      ++rec.accepted_steps;
      t = (target - (t + step) <= 1e-12 * std::max(1.0, target)) ? target : t + step;
      if (t == target) {
        rec.times.push_back(t);
        rec.states.push_back(y);
        ++next;
      }
    }
    return rec;
  }

  const double h_min_factor = 1e-14;
  k1 = field(y);
  while (next < samples.size()) {
    const double target = samples[next];
    const bool clipped = t + h >= target;
    // Split the last stretch before a sample evenly so no sliver step remains.
    const double step = clipped ? target - t : (t + 2 * h > target ? 0.5 * (target - t) : h);
    if (step < h_min_factor * std::max(1.0, std::abs(t)))
      throw IntegrationError("step size underflow", t);

    detail::axpy(tmp, y, step, {{DP::a21, &k1}});
    k2 = field(tmp);
    detail::axpy(tmp, y, step, {{DP::a31, &k1}, {DP::a32, &k2}});
    k3 = field(tmp);
    detail::axpy(tmp, y, step, {{DP::a41, &k1}, {DP::a42, &k2}, {DP::a43, &k3}});
    k4 = field(tmp);
    detail::axpy(tmp, y, step, {{DP::a51, &k1}, {DP::a52, &k2}, {DP::a53, &k3}, {DP::a54, &k4}});
    k5 = field(tmp);
    detail::axpy(tmp, y, step, {{DP::a61, &k1}, {DP::a62, &k2}, {DP::a63, &k3}, {DP::a64, &k4}, {DP::a65, &k5}});
    k6 = field(tmp);
    detail::axpy(y_new, y, step, {{DP::b1, &k1}, {DP::b3, &k3}, {DP::b4, &k4}, {DP::b5, &k5}, {DP::b6, &k6}});
    k7 = field(y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double e = step * (DP::e1 * k1[i] + DP::e3 * k3[i] + DP::e4 * k4[i] + DP::e5 * k5[i] +
                               DP::e6 * k6[i] + DP::e7 * k7[i]);
      const double scale = cfg.error_tol * (1.0 + std::max(std::abs(y[i]), std::abs(y_new[i])));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) throw IntegrationError("non-finite state", t);

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = clipped ? target : t + step;
      y.swap(y_new);
      k1.swap(k7);  // first-same-as-last
      ++rec.accepted_steps;
      if (clipped) {
        rec.times.push_back(t);
        rec.states.push_back(y);
        ++next;
      }
      // A clipped step says nothing about how large h may grow.
      if (!clipped) h = step * factor;
    } else {
      ++rec.rejected_steps;
      h = step * std::min(factor, 1.0);
    }
  }
  return rec;
}

}  // namespace isoflow
