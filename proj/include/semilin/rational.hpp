#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace semilin {

// Exact rational used for exponents (p, Hölder triples, fractional powers).
class RationalExp {
 public:
  constexpr RationalExp() = default;
  constexpr RationalExp(std::int64_t n) : num_(n), den_(1) {}
  RationalExp(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw std::invalid_argument("RationalExp: zero denominator");
    normalize();
  }

  // Parses "3/2", "1.5", "-2", "1.999999".
  static RationalExp parse(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend RationalExp operator+(RationalExp a, RationalExp b) {
    return {checked_add(mul(a.num_, b.den_), mul(b.num_, a.den_)), mul(a.den_, b.den_)};
  }
  friend RationalExp operator-(RationalExp a) { return {-a.num_, a.den_}; }
  friend RationalExp operator-(RationalExp a, RationalExp b) { return a + (-b); }
  friend RationalExp operator*(RationalExp a, RationalExp b) {
    return {mul(a.num_, b.num_), mul(a.den_, b.den_)};
  }
  friend RationalExp operator/(RationalExp a, RationalExp b) {
    if (b.num_ == 0) throw std::invalid_argument("RationalExp: division by zero");
    return {mul(a.num_, b.den_), mul(a.den_, b.num_)};
  }
  friend bool operator==(RationalExp a, RationalExp b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(RationalExp a, RationalExp b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(RationalExp a, RationalExp b) { return b < a; }
  friend bool operator<=(RationalExp a, RationalExp b) { return !(b < a); }
  friend bool operator>=(RationalExp a, RationalExp b) { return !(a < b); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, RationalExp r) { return os << r.str(); }

 private:
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("RationalExp overflow");
    return r;
  }
  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("RationalExp overflow");
    return r;
  }
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace semilin
