#include "semilin/interval.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>

namespace semilin {

using detail::next_down;
using detail::next_up;

namespace detail {
void throw_non_finite(const char* op) {
  throw DomainError(std::string("Interval: non-finite result in ") + op);
}
}  // namespace detail

RationalExp RationalExp::parse(const std::string& text) {
  auto bad = [&] { return UsageError("cannot parse rational '" + text + "'"); };
  if (text.empty()) throw bad();
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    try {
      std::size_t used = 0;
      long long n = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw bad();
      std::string rest = text.substr(slash + 1);
      long long d = std::stoll(rest, &used);
      if (used != rest.size() || d == 0) throw bad();
      return {n, d};
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  std::int64_t num = 0, den = 1;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) throw bad();
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw bad();
    seen_digit = true;
    if (__builtin_mul_overflow(num, 10, &num) || __builtin_add_overflow(num, c - '0', &num)) throw bad();
    if (seen_dot && __builtin_mul_overflow(den, 10, &den)) throw bad();
  }
  if (!seen_digit) throw bad();
  return {neg ? -num : num, den};
}

Interval Interval::from_string(const std::string& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v))
    throw UsageError("cannot parse interval literal '" + text + "'");
  // Exact when the literal is a short dyadic number; otherwise one ulp each way.
  try {
    RationalExp r = RationalExp::parse(text);
    Interval e = from_rational(r);
    if (e.is_point()) return e;
  } catch (const std::exception&) {
  }
  return {next_down(v), next_up(v)};
}

Interval Interval::from_rational(RationalExp r) {
  return Interval(static_cast<double>(r.num())) / Interval(static_cast<double>(r.den()));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << to_string(x); }

std::string to_string(const Interval& x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", x.lo(), x.hi());
  return buf;
}

Interval intersect(const Interval& a, const Interval& b) {
  double lo = std::fmax(a.lo(), b.lo()), hi = std::fmin(a.hi(), b.hi());
  if (lo > hi) throw DomainError("intersect: disjoint intervals");
  return {lo, hi};
}

Interval abs(const Interval& x) {
  if (x.lo() >= 0) return x;
  if (x.hi() <= 0) return -x;
  return {0.0, x.mag()};
}

Interval sqr(const Interval& x) {
  Interval a = abs(x);
  return {detail::mul_down(a.lo(), a.lo()), detail::mul_up(a.hi(), a.hi())};
}

Interval max(const Interval& a, const Interval& b) {
  return {std::fmax(a.lo(), b.lo()), std::fmax(a.hi(), b.hi())};
}
Interval min(const Interval& a, const Interval& b) {
  return {std::fmin(a.lo(), b.lo()), std::fmin(a.hi(), b.hi())};
}

Interval pi() {
  static const Interval v{next_down(std::numbers::pi), next_up(std::numbers::pi)};
  return v;
}

Interval ln2() {
  static const Interval v{next_down(std::numbers::ln2), next_up(std::numbers::ln2)};
  return v;
}

Interval sqrt(const Interval& x) {
  if (x.lo() < 0) throw DomainError("sqrt of an interval with negative part");
  return {detail::sqrt_down(x.lo()), detail::sqrt_up(x.hi())};
}

namespace {

// 1/k! for k = 0..kMaxFact as enclosures.
constexpr int kMaxFact = 40;
const std::array<Interval, kMaxFact + 1>& inv_factorials() {
  static const auto table = [] {
    std::array<Interval, kMaxFact + 1> t;
    t[0] = Interval(1.0);
    for (int k = 1; k <= kMaxFact; ++k) t[k] = t[k - 1] / Interval(k);
    return t;
  }();
  return table;
}

Interval symmetric(double e) { return {-e, e}; }

// ln2 = kLn2Hi + [kLn2Lo]; kLn2Hi has 42 significant bits so k * kLn2Hi is exact
// for |k| < 2^11.
constexpr double kLn2Hi = 0x1.62e42fefa3800p-1;
const Interval kLn2Lo{0x1.ef35793c76730p-45, 0x1.ef35793c76731p-45};

Interval times_ln2(double k) { return Interval(k * kLn2Hi) + Interval(k) * kLn2Lo; }

// exp at a point: x = k ln2 + r, |r| <= 0.35, Taylor of degree 18.
Interval exp_point(double x) {
  if (x == 0) return Interval(1.0);
  if (x > 709.0) throw DomainError("exp overflow");
  if (x < -744.0) return {0.0, std::numeric_limits<double>::denorm_min()};
  const auto& f = inv_factorials();
  double k = std::nearbyint(x / std::numbers::ln2);
  Interval r = (Interval(x) - Interval(k * kLn2Hi)) - Interval(k) * kLn2Lo;
  constexpr int N = 18;
  Interval acc = f[N];
  for (int i = N - 1; i >= 0; --i) acc = acc * r + f[i];
  double m = r.mag();
  // |rest| <= m^{N+1}/(N+1)! * e^m, and e^m < 2 for m < 0.6
  Interval rest = pow(Interval(m), N + 1) * f[N + 1] * 2;
  acc += symmetric(rest.hi());
  int ki = static_cast<int>(k);
  double lo = std::ldexp(acc.lo(), ki), hi = std::ldexp(acc.hi(), ki);
  if (lo < 0x1p-1000) lo = lo > 0 ? next_down(lo) : 0.0;
  if (hi < 0x1p-1000) hi = next_up(hi);
  if (lo < 0) lo = 0;
  return {lo, hi};
}

// log at a positive point: x = m 2^e, log m = 2 atanh(s), |s| <= 0.172.
Interval log_point(double x) {
  if (!(x > 0)) throw DomainError("log of a non-positive number");
  if (x == 1) return Interval(0.0);
  int e = 0;
  double m = std::frexp(x, &e);
  if (m < std::numbers::sqrt2 / 2) {
    m *= 2;
    e -= 1;
  }
  Interval s = (Interval(m) - 1) / (Interval(m) + 1);
  Interval s2 = sqr(s);
  constexpr int K = 16;
  Interval acc = Interval(1.0) / Interval(2 * K + 1);
  for (int k = K - 1; k >= 0; --k) acc = acc * s2 + Interval(1.0) / Interval(2 * k + 1);
  acc = acc * s * 2;
  double sm = s.mag();
  Interval rest = pow(Interval(sm), 2 * K + 3) * 2 / (Interval(2 * K + 3) * (1 - sqr(Interval(sm))));
  acc += symmetric(rest.hi());
  return times_ln2(static_cast<double>(e)) + acc;
}

// sin(pi r) for |r| <= 1/2.
Interval sinpi_kernel(double r) {
  if (r == 0) return Interval(0.0);
  if (r == 0.5) return Interval(1.0);
  if (r == -0.5) return Interval(-1.0);
  const auto& f = inv_factorials();
  Interval z = pi() * r;
  Interval z2 = sqr(z);
  constexpr int K = 14;
  Interval acc = K % 2 ? -f[2 * K + 1] : f[2 * K + 1];
  for (int k = K - 1; k >= 0; --k) {
    Interval c = f[2 * k + 1];
    acc = acc * z2 + (k % 2 ? -c : c);
  }
  acc = acc * z;
  Interval rest = pow(Interval(z.mag()), 2 * K + 3) * f[2 * K + 3];
  acc += symmetric(rest.hi());
  return intersect(acc, Interval(-1.0, 1.0));
}

// sin(pi x) at a point, exact reduction to [-1/2, 1/2].
Interval sinpi_point(double x) {
  if (!std::isfinite(x)) throw DomainError("sinpi of non-finite");
  double r = std::remainder(x, 2.0);  // exact, r in [-1, 1]
  if (r > 0.5) r = 1.0 - r;
  else if (r < -0.5) r = -1.0 - r;
  return sinpi_kernel(r);
}

}  // namespace

Interval exp(const Interval& x) { return {exp_point(x.lo()).lo(), exp_point(x.hi()).hi()}; }

Interval log(const Interval& x) {
  if (!(x.lo() > 0)) throw DomainError("log of an interval that is not strictly positive");
  return {log_point(x.lo()).lo(), log_point(x.hi()).hi()};
}

Interval sinpi(const Interval& x) {
  if (x.is_point()) return sinpi_point(x.lo());
  if (x.width() >= 2) return Interval(-1.0, 1.0);
  Interval a = sinpi_point(x.lo()), b = sinpi_point(x.hi());
  double lo = std::fmin(a.lo(), b.lo()), hi = std::fmax(a.hi(), b.hi());
  double ra = std::remainder(x.lo(), 2.0);  // exact offset of x.lo in [-1, 1]
  double rb = detail::add_up(ra, x.width());
  auto hits = [&](double t) { return ra <= t && t <= rb; };
  if (hits(0.5) || hits(2.5)) hi = 1.0;
  if (hits(-0.5) || hits(1.5)) lo = -1.0;
  return {lo, hi};
}

Interval cospi(const Interval& x) { return sinpi(x + 0.5); }

Interval sin(const Interval& x) { return sinpi(x / pi()); }
Interval cos(const Interval& x) { return cospi(x / pi()); }

namespace {

Interval powi_point(double v, int n) {
  Interval base(v), acc(1.0);
  while (n > 0) {
    if (n & 1) acc *= base;
    n >>= 1;
    if (n) base = sqr(base);
  }
  return acc;
}

Interval powi_nonneg(const Interval& x, int n) {
  return {powi_point(x.lo(), n).lo(), powi_point(x.hi(), n).hi()};
}

}  // namespace

Interval pow(const Interval& x, int n) {
  if (n == 0) return Interval(1.0);
  if (n < 0) return Interval(1.0) / pow(x, -n);
  if (n == 1) return x;
  if (x.lo() >= 0) return powi_nonneg(x, n);
  if (x.hi() <= 0) {
    Interval r = powi_nonneg(-x, n);
    return n % 2 ? -r : r;
  }
  double up_neg = powi_point(-x.lo(), n).hi();
  double up_pos = powi_point(x.hi(), n).hi();
  if (n % 2 == 0) return {0.0, std::fmax(up_neg, up_pos)};
  return {-up_neg, up_pos};
}

namespace {

Interval rpow_point(double v, RationalExp e) {
  if (v == 0) return Interval(0.0);
  if (v == 1) return Interval(1.0);
  if (e.den() == 2) {
    Interval s = sqrt(Interval(v));
    return pow(s, static_cast<int>(e.num()));
  }
  return exp(Interval::from_rational(e) * log_point(v));
}

}  // namespace

Interval pow(const Interval& x, RationalExp e) {
  if (e.is_integer()) {
    if (e.num() > 1'000'000 || e.num() < -1'000'000) throw UnsupportedError("pow: exponent too large");
    return pow(x, static_cast<int>(e.num()));
  }
  if (x.lo() < 0) throw DomainError("pow: negative base with non-integer exponent");
  if (e.num() > 0) {
    double lo = x.lo() == 0 ? 0.0 : rpow_point(x.lo(), e).lo();
    return {std::fmax(lo, 0.0), rpow_point(x.hi(), e).hi()};
  }
  if (!(x.lo() > 0)) throw DomainError("pow: zero base with negative exponent");
  return {std::fmax(rpow_point(x.hi(), e).lo(), 0.0), rpow_point(x.lo(), e).hi()};
}

Interval gamma_half(RationalExp x) {
  if (!(x > RationalExp(0))) throw DomainError("gamma_half: argument must be positive");
  if (x.is_integer()) {
    Interval r(1.0);
    for (std::int64_t k = 2; k < x.num(); ++k) r *= Interval(static_cast<double>(k));
    return r;
  }
  if (x.den() != 2) throw UnsupportedError("gamma_half: only integers and half-integers are supported");
  // Gamma(n + 1/2) = sqrt(pi) * prod_{k=1}^{n} (k - 1/2)
  std::int64_t n = (x.num() - 1) / 2;
  Interval r = sqrt(pi());
  for (std::int64_t k = 1; k <= n; ++k) r *= Interval(static_cast<double>(k) - 0.5);
  return r;
}

}  // namespace semilin
