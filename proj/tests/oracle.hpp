#pragma once

// Independent reference computations for the tests: 50-digit arithmetic and
// adaptive tanh-sinh quadrature. Nothing here uses the library's enclosures.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "semilin/interval.hpp"

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline bool inside(const semilin::Interval& x, const mp& v) { return mp(x.lo()) <= v && v <= mp(x.hi()); }
inline bool inside(const semilin::Interval& x, double v) { return x.lo() <= v && v <= x.hi(); }

inline mp pi() { return boost::math::constants::pi<mp>(); }

// Integral over [a,b] of f with tanh-sinh; handles endpoint singularities.
inline double integrate1d(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  return ts.integrate(f, a, b, tol);
}

inline double integrate2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                          double by, double tol = 1e-14) {
  boost::math::quadrature::tanh_sinh<double> outer(15), inner(15);
  return outer.integrate(
      [&](double x) { return inner.integrate([&](double y) { return f(x, y); }, ay, by, tol); }, ax, bx, tol);
}

// Long-double sine series evaluation, independent of the library's code path.
struct SineSum {
  std::vector<int> ix, iy;
  std::vector<double> a;
  double operator()(double x, double y) const {
    long double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
      s += a[k] * std::sin(static_cast<long double>(ix[k]) * M_PIl * x) *
           std::sin(static_cast<long double>(iy[k]) * M_PIl * y);
    return static_cast<double>(s);
  }
};

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240917);
  return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

}  // namespace oracle
