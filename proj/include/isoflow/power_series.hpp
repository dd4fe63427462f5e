#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "isoflow/exact_rational.hpp"

namespace isoflow {

/// Truncated formal power series with exact rational coefficients.
/// coefficient(i) is the coefficient of z^i, for 0 <= i <= order().
class PowerSeries {
 public:
  explicit PowerSeries(std::size_t order) : coeffs_(order + 1, ExactRational{0}) {}

  PowerSeries(std::size_t order, std::vector<ExactRational> coeffs) : coeffs_(std::move(coeffs)) {
    coeffs_.resize(order + 1, ExactRational{0});
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  const std::vector<ExactRational>& coefficients() const { return coeffs_; }

  const ExactRational& operator[](std::size_t i) const { return coeffs_.at(i); }
  ExactRational& operator[](std::size_t i) { return coeffs_.at(i); }

  friend PowerSeries operator+(const PowerSeries& x, const PowerSeries& y) {
    PowerSeries r(std::min(x.order(), y.order()));
    for (std::size_t i = 0; i <= r.order(); ++i) r[i] = x[i] + y[i];
    return r;
  }

  friend PowerSeries operator-(const PowerSeries& x) {
    PowerSeries r(x.order());
    for (std::size_t i = 0; i <= r.order(); ++i) r[i] = -x[i];
    return r;
  }

  friend PowerSeries operator-(const PowerSeries& x, const PowerSeries& y) { return x + (-y); }

  friend PowerSeries operator*(const PowerSeries& x, const PowerSeries& y) {
    PowerSeries r(std::min(x.order(), y.order()));
    for (std::size_t n = 0; n <= r.order(); ++n) {
      ExactRational acc{0};
      for (std::size_t i = 0; i <= n; ++i) {
        if (x[i].is_zero() || y[n - i].is_zero()) continue;
        acc += x[i] * y[n - i];
      }
      r[n] = acc;
    }
    return r;
  }

  /// Exact quotient x / y; y must have a nonzero constant term.
  friend PowerSeries operator/(const PowerSeries& x, const PowerSeries& y) {
    if (y[0].is_zero()) throw ContractError("PowerSeries: divisor has zero constant term");
    PowerSeries q(std::min(x.order(), y.order()));
    for (std::size_t n = 0; n <= q.order(); ++n) {
      ExactRational acc = x[n];
      for (std::size_t i = 1; i <= n; ++i) {
        if (y[i].is_zero() || q[n - i].is_zero()) continue;
        acc -= y[i] * q[n - i];
      }
      q[n] = acc / y[0];
    }
    return q;
  }

  /// The series of f(scale * z).
  PowerSeries rescaled(const ExactRational& scale) const {
    PowerSeries r(order());
    ExactRational power{1};
    for (std::size_t i = 0; i <= order(); ++i) {
      r[i] = coeffs_[i] * power;
      if (i < order()) power *= scale;
    }
    return r;
  }

  /// The series of f(g(z)); g must have zero constant term.
  PowerSeries compose(const PowerSeries& g) const {
    if (!g[0].is_zero()) throw ContractError("PowerSeries: inner series has nonzero constant term");
    const std::size_t n = std::min(order(), g.order());
    PowerSeries result(n);
    PowerSeries power(n);
    power[0] = 1;
    for (std::size_t i = 0; i <= n; ++i) {
      if (!coeffs_[i].is_zero()) {
        for (std::size_t m = 0; m <= n; ++m) result[m] += coeffs_[i] * power[m];
      }
      if (i < n) power = power * PowerSeries(n, g.coefficients());
    }
    return result;
  }

 private:
  std::vector<ExactRational> coeffs_;
};

}  // namespace isoflow
