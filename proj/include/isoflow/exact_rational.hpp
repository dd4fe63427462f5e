#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

#include "isoflow/error.hpp"

namespace isoflow {

using int128 = __int128;

namespace checked {

inline int128 add(int128 x, int128 y) {
  int128 r;
  if (__builtin_add_overflow(x, y, &r)) throw OverflowError("128-bit overflow in addition");
  return r;
}

inline int128 sub(int128 x, int128 y) {
  int128 r;
  if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("128-bit overflow in subtraction");
  return r;
}

inline int128 mul(int128 x, int128 y) {
  int128 r;
  if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("128-bit overflow in multiplication");
  return r;
}

inline int64_t mul(int64_t x, int64_t y) {
  int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("64-bit overflow in multiplication");
  return r;
}

inline int64_t add(int64_t x, int64_t y) {
  int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw OverflowError("64-bit overflow in addition");
  return r;
}

inline int128 abs(int128 x) {
  if (x == std::numeric_limits<int128>::min()) throw OverflowError("128-bit overflow in abs");
  return x < 0 ? -x : x;
}

inline int128 pow2(unsigned e) {
  if (e >= 126) throw OverflowError("128-bit overflow in power of two");
  return int128{1} << e;
}

}  // namespace checked

inline int128 gcd(int128 a, int128 b) {
  a = checked::abs(a);
  b = checked::abs(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string to_string(int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  // Work with negative values so that the minimum is representable.
  std::string digits;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    digits.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
    v /= 10;
  }
  if (neg) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

/// Fraction of 128-bit integers, always reduced, denominator positive.
/// Every operation throws OverflowError instead of wrapping.
class ExactRational {
 public:
  constexpr ExactRational() = default;
  ExactRational(int128 n) : num_(n), den_(1) {}  // NOLINT(implicit)
  ExactRational(int n) : num_(n), den_(1) {}     // NOLINT(implicit)
  ExactRational(int64_t n) : num_(n), den_(1) {} // NOLINT(implicit)

  ExactRational(int128 n, int128 d) {
    if (d == 0) throw ContractError("ExactRational: zero denominator");
    if (d < 0) {
      n = checked::sub(0, n);
      d = checked::sub(0, d);
    }
    const int128 g = gcd(n, d);
    num_ = n / g;
    den_ = d / g;
  }

  int128 numerator() const { return num_; }
  int128 denominator() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  /// Integer value; throws ConsistencyError when the fraction is not whole.
  int128 to_integer() const {
    if (den_ != 1) throw ConsistencyError("expected an integer, got " + to_string());
    return num_;
  }

  int64_t to_int64() const {
    const int128 v = to_integer();
    if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min())
      throw OverflowError("value " + isoflow::to_string(v) + " exceeds 64 bits");
    return static_cast<int64_t>(v);
  }

  double to_double() const {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
  }

  /// "num/den", or just "num" for integers when `compact` is set.
  std::string to_string(bool compact = false) const {
    if (compact && den_ == 1) return isoflow::to_string(num_);
    return isoflow::to_string(num_) + "/" + isoflow::to_string(den_);
  }

  ExactRational operator-() const { return ExactRational(checked::sub(0, num_), den_); }

  friend ExactRational operator+(const ExactRational& x, const ExactRational& y) {
    const int128 g = gcd(x.den_, y.den_);
    const int128 xs = y.den_ / g;
    const int128 ys = x.den_ / g;
    return {checked::add(checked::mul(x.num_, xs), checked::mul(y.num_, ys)),
            checked::mul(x.den_, xs)};
  }

  friend ExactRational operator-(const ExactRational& x, const ExactRational& y) { return x + (-y); }

  friend ExactRational operator*(const ExactRational& x, const ExactRational& y) {
    // Denominators are positive, so both gcds are nonzero.
    const int128 g1 = gcd(x.num_, y.den_);
    const int128 g2 = gcd(y.num_, x.den_);
    return {checked::mul(x.num_ / g1, y.num_ / g2), checked::mul(x.den_ / g2, y.den_ / g1)};
  }

  friend ExactRational operator/(const ExactRational& x, const ExactRational& y) {
    if (y.num_ == 0) throw ContractError("ExactRational: division by zero");
    return x * ExactRational(y.den_, y.num_);
  }

  ExactRational& operator+=(const ExactRational& y) { return *this = *this + y; }
  ExactRational& operator-=(const ExactRational& y) { return *this = *this - y; }
  ExactRational& operator*=(const ExactRational& y) { return *this = *this * y; }
  ExactRational& operator/=(const ExactRational& y) { return *this = *this / y; }

  friend bool operator==(const ExactRational& x, const ExactRational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }

  friend std::strong_ordering operator<=>(const ExactRational& x, const ExactRational& y) {
    const int128 l = checked::mul(x.num_, y.den_);
    const int128 r = checked::mul(y.num_, x.den_);
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  int128 num_ = 0;
  int128 den_ = 1;
};

}  // namespace isoflow
