#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>

#include "semilin/rational.hpp"

namespace semilin {

// Argument outside the domain of an operation (0 in a divisor, log of a
// non-positive interval, overflow to a non-finite endpoint).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Mismatched shapes, bad configuration, malformed input.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested a supported-in-principle feature outside what is implemented.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double next_up(double x) {
  if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) return x;
  if (x == 0.0) return std::numeric_limits<double>::denorm_min();
  auto bits = std::bit_cast<std::uint64_t>(x);
  bits = x > 0 ? bits + 1 : bits - 1;
  return std::bit_cast<double>(bits);
}

inline double next_down(double x) { return -next_up(-x); }

// Below this magnitude fma residuals may underflow, so results get nudged
// unconditionally.
inline constexpr double kTiny = 0x1p-960;

// TwoSum: exact error of s = fl(a + b).
inline double sum_err(double a, double b, double s) {
  double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

inline double add_down(double a, double b) {
  double s = a + b;
  return sum_err(a, b, s) < 0 ? next_down(s) : s;
}
inline double add_up(double a, double b) {
  double s = a + b;
  return sum_err(a, b, s) > 0 ? next_up(s) : s;
}
inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b) {
  double p = a * b;
  if (std::fabs(p) < kTiny) return (a == 0 || b == 0) ? 0.0 : next_down(p);
  return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}
inline double mul_up(double a, double b) {
  double p = a * b;
  if (std::fabs(p) < kTiny) return (a == 0 || b == 0) ? 0.0 : next_up(p);
  return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}

// The exact quotient is q + r/b with r = a - q*b computed exactly by fma.
inline double div_down(double a, double b) {
  double q = a / b;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return a == 0 ? 0.0 : next_down(q);
  double r = std::fma(-q, b, a);
  return (r != 0 && ((r < 0) != (b < 0))) ? next_down(q) : q;
}
inline double div_up(double a, double b) {
  double q = a / b;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return a == 0 ? 0.0 : next_up(q);
  double r = std::fma(-q, b, a);
  return (r != 0 && ((r < 0) == (b < 0))) ? next_up(q) : q;
}

inline double sqrt_down(double x) {
  double s = std::sqrt(x);
  if (x < kTiny) return x == 0 ? 0.0 : next_down(s);
  return std::fma(-s, s, x) < 0 ? next_down(s) : s;
}
inline double sqrt_up(double x) {
  double s = std::sqrt(x);
  if (x < kTiny) return x == 0 ? 0.0 : next_up(s);
  return std::fma(-s, s, x) > 0 ? next_up(s) : s;
}

[[noreturn]] void throw_non_finite(const char* op);

}  // namespace detail

// Closed interval [lo, hi] with finite binary64 endpoints. Every operation
// returns an enclosure of the exact real result over all arguments.
class Interval {
 public:
  constexpr Interval() noexcept = default;
  constexpr Interval(double v) noexcept : lo_(v), hi_(v) {}  // NOLINT: point promotion
  constexpr Interval(int v) noexcept : lo_(v), hi_(v) {}     // NOLINT
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw DomainError("Interval: invalid endpoints");
  }

  // Tight enclosure of a decimal literal such as "0.22361".
  static Interval from_string(const std::string& text);
  static Interval from_rational(RationalExp r);
  static Interval hull(const Interval& a, const Interval& b) {
    return raw(std::fmin(a.lo_, b.lo_), std::fmax(a.hi_, b.hi_));
  }
  static Interval entire_unit() { return raw(-1.0, 1.0); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const {
    double m = 0.5 * lo_ + 0.5 * hi_;
    return (m < lo_ || m > hi_) ? lo_ : m;
  }
  // Upper bound on the distance from mid() to either endpoint.
  double rad() const {
    double m = mid();
    return std::fmax(detail::sub_up(hi_, m), detail::sub_up(m, lo_));
  }
  double width() const { return detail::sub_up(hi_, lo_); }
  double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }
  double mig() const {
    if (lo_ <= 0 && hi_ >= 0) return 0.0;
    return std::fmin(std::fabs(lo_), std::fabs(hi_));
  }
  bool is_point() const { return lo_ == hi_; }
  bool contains(double v) const { return lo_ <= v && v <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool overlaps(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
  bool positive() const { return lo_ > 0; }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

  friend Interval operator-(const Interval& a) { return raw(-a.hi_, -a.lo_); }
  friend Interval operator+(const Interval& a, const Interval& b) {
    double lo = detail::add_down(a.lo_, b.lo_);
    double hi = detail::add_up(a.hi_, b.hi_);
    return checked(lo, hi, "add");
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    double lo = detail::sub_down(a.lo_, b.hi_);
    double hi = detail::sub_up(a.hi_, b.lo_);
    return checked(lo, hi, "sub");
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    using detail::mul_down;
    using detail::mul_up;
    const double al = a.lo_, ah = a.hi_, bl = b.lo_, bh = b.hi_;
    double lo, hi;
    if (al >= 0) {
      if (bl >= 0) lo = mul_down(al, bl), hi = mul_up(ah, bh);
      else if (bh <= 0) lo = mul_down(ah, bl), hi = mul_up(al, bh);
      else lo = mul_down(ah, bl), hi = mul_up(ah, bh);
    } else if (ah <= 0) {
      if (bl >= 0) lo = mul_down(al, bh), hi = mul_up(ah, bl);
      else if (bh <= 0) lo = mul_down(ah, bh), hi = mul_up(al, bl);
      else lo = mul_down(al, bh), hi = mul_up(al, bl);
    } else {
      if (bl >= 0) lo = mul_down(al, bh), hi = mul_up(ah, bh);
      else if (bh <= 0) lo = mul_down(ah, bl), hi = mul_up(al, bl);
      else
        lo = std::fmin(mul_down(al, bh), mul_down(ah, bl)), hi = std::fmax(mul_up(al, bl), mul_up(ah, bh));
    }
    return checked(lo, hi, "mul");
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    using detail::div_down;
    using detail::div_up;
    if (b.lo_ <= 0 && b.hi_ >= 0) throw DomainError("Interval: division by an interval containing 0");
    double lo = std::fmin(std::fmin(div_down(a.lo_, b.lo_), div_down(a.lo_, b.hi_)),
                          std::fmin(div_down(a.hi_, b.lo_), div_down(a.hi_, b.hi_)));
    double hi = std::fmax(std::fmax(div_up(a.lo_, b.lo_), div_up(a.lo_, b.hi_)),
                          std::fmax(div_up(a.hi_, b.lo_), div_up(a.hi_, b.hi_)));
    return checked(lo, hi, "div");
  }
  friend Interval operator+(const Interval& a, double b) { return a + Interval(b); }
  friend Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
  friend Interval operator-(const Interval& a, double b) { return a - Interval(b); }
  friend Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
  friend Interval operator*(const Interval& a, double b) { return a * Interval(b); }
  friend Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
  friend Interval operator/(const Interval& a, double b) { return a / Interval(b); }
  friend Interval operator/(double a, const Interval& b) { return Interval(a) / b; }
  friend Interval operator+(const Interval& a, int b) { return a + Interval(b); }
  friend Interval operator+(int a, const Interval& b) { return Interval(a) + b; }
  friend Interval operator-(const Interval& a, int b) { return a - Interval(b); }
  friend Interval operator-(int a, const Interval& b) { return Interval(a) - b; }
  friend Interval operator*(const Interval& a, int b) { return a * Interval(b); }
  friend Interval operator*(int a, const Interval& b) { return Interval(a) * b; }
  friend Interval operator/(const Interval& a, int b) { return a / Interval(b); }
  friend Interval operator/(int a, const Interval& b) { return Interval(a) / b; }

  // Set equality, used by Eigen internals and tests.
  friend bool operator==(const Interval& a, const Interval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }
  friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Interval& x);

 private:
  static Interval raw(double lo, double hi) {
    Interval r;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }
  static Interval checked(double lo, double hi, const char* op) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) detail::throw_non_finite(op);
    return raw(lo, hi);
  }

  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
inline Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
inline Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
inline Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

inline Interval hull(const Interval& a, const Interval& b) { return Interval::hull(a, b); }
Interval intersect(const Interval& a, const Interval& b);
Interval abs(const Interval& x);
Interval sqr(const Interval& x);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

// Constants as tight enclosures.
Interval pi();
Interval ln2();

Interval sqrt(const Interval& x);
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
// sin(pi x) and cos(pi x); exact range reduction for dyadic arguments.
Interval sinpi(const Interval& x);
Interval cospi(const Interval& x);
Interval pow(const Interval& x, int n);
// Real power with rational exponent. Non-integer exponents need x >= 0
// (x > 0 when the exponent is negative).
Interval pow(const Interval& x, RationalExp e);
// Gamma at a positive integer or half-integer.
Interval gamma_half(RationalExp x);

std::string to_string(const Interval& x);

}  // namespace semilin
