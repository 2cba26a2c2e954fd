#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "semilin/psa.hpp"

using namespace semilin;
using oracle::mp;

namespace {

double ulp(double x) { return detail::next_up(std::fabs(x)) - std::fabs(x); }

const Interval kD{0.0, Interval::from_string("0.1").hi()};

PowerSeries1D poly(std::initializer_list<double> c, Interval d = kD) {
  IVector v(static_cast<Eigen::Index>(c.size()));
  int i = 0;
  for (double x : c) v[i++] = Interval(x);
  return {v, d};
}

// Member function of a model: the midpoint polynomial.
mp mid_eval(const PowerSeries1D& u, const mp& x) {
  mp s = 0;
  for (int i = u.degree(); i >= 0; --i) s = s * x + mp(u[i].mid());
  return s;
}

mp mid_eval(const PowerSeries2D& u, const mp& x, const mp& y) {
  mp s = 0;
  for (int i = u.degree(); i >= 0; --i) {
    mp r = 0;
    for (int j = u.degree(); j >= 0; --j) r = r * y + mp(u(i, j).mid());
    s = s * x + r;
  }
  return s;
}

PowerSeries1D random_model(int n, const Interval& d, double width) {
  IVector c(n + 1);
  for (int i = 0; i <= n; ++i) {
    double m = oracle::uniform(-1, 1) / (1 + i);
    double w = oracle::uniform(0, width);
    c[i] = Interval(m - w, m + w);
  }
  return {c, d};
}

PowerSeries2D random_model2(int n, const Interval& dx, const Interval& dy, double width) {
  IMatrix c(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      double m = oracle::uniform(-1, 1) / (1 + i + j);
      double w = oracle::uniform(0, width);
      c(i, j) = Interval(m - w, m + w);
    }
  return {c, dx, dy};
}

double sample(const Interval& d) { return oracle::uniform(d.lo(), d.hi()); }

}  // namespace

TEST_CASE("worked examples: add, sub, mul") {
  auto a = poly({1, 2, -3}), b = poly({1, -1, 1});
  auto s = a + b;
  CHECK(s[0] == Interval(2.0));
  CHECK(s[1] == Interval(1.0));
  CHECK(s[2] == Interval(-2.0));
  auto d = a - b;
  CHECK(d[0] == Interval(0.0));
  CHECK(d[1] == Interval(3.0));
  CHECK(d[2] == Interval(-4.0));
  auto m = a * b;
  CHECK(m[0] == Interval(1.0));
  CHECK(m[1] == Interval(1.0));
  CHECK(m[2].contains(Interval(-4.0, -3.5)));
  CHECK(m[2].lo() >= -4.0 - 4 * ulp(4.0));
  CHECK(m[2].hi() <= -3.5 + 4 * ulp(3.5));
  CHECK_THROWS_AS(a + poly({1, 2}), UsageError);
}

TEST_CASE("reduce_degree") {
  auto r = reduce_degree(poly({1, 1, -4, 5, -3}), 2);
  CHECK(r[2].contains(Interval(-4.0, -3.5)));
  auto same = reduce_degree(poly({1, 2, 3}), 2);
  CHECK(same.coeffs() == poly({1, 2, 3}).coeffs());
  auto u = reduce_degree(poly({0, 0, 1, 1}, Interval(0.0, 1.0)), 2);
  CHECK(u[2].contains(Interval(1.0, 2.0)));
}

TEST_CASE("range") {
  Interval r = range(poly({1, 2, -3}));
  CHECK(r.lo() >= 1.0 - 1e-15);
  CHECK(r.hi() <= 1.2 + 1e-15);
  CHECK(range(PowerSeries1D::constant(Interval(3.5), 3, kD)).contains(3.5));
  Interval x = range(PowerSeries1D::variable(2, Interval(-1.0, 1.0)));
  CHECK(x.contains(Interval(-1.0, 1.0)));
  CHECK(x.width() <= 2 + 4 * ulp(1.0));
}

TEST_CASE("worked example: log composition") {
  auto l = compose(ElemFn::log(), poly({1, 2, -3}));
  CHECK(l[0].contains(0.0));
  CHECK(l[1].contains(2.0));
  CHECK(oracle::inside(l[2], mp(-5)));
  CHECK(oracle::inside(l[2], mp(-143) / 36));
  CHECK(l[2].lo() >= -5 - 1e-12);
  CHECK(l[2].hi() <= -143.0 / 36 + 1e-12);
}

TEST_CASE("trivial compositions") {
  auto u = poly({1, 0.5, -0.25});
  auto id = compose(ElemFn::pow(RationalExp(1)), u);
  for (int i = 0; i <= 2; ++i) CHECK(id[i].contains(u[i]));
  auto r = compose(ElemFn::pow(RationalExp(1, 2)), PowerSeries1D::constant(Interval(4.0), 3, kD));
  CHECK(r[0].contains(2.0));
  CHECK(range(r).contains(2.0));
  CHECK(range(r).width() < 1e-14);
  CHECK_THROWS_AS(compose(ElemFn::pow(RationalExp(1, 2)), poly({0.01, -1, 0})), PositivityError);
  try {
    compose(ElemFn::log(), poly({0.05, -1, 0}));
  } catch (const PositivityError& e) {
    CHECK(e.range().lo() <= 0);
  }
}

TEST_CASE("1D containment sampling") {
  const Interval d(-0.3, 0.5);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + trial % 6;
    auto a = random_model(n, d, 1e-6), b = random_model(n, d, 1e-6);
    auto pos = a + Interval(3.0);
    auto sum = a + b, diff = a - b, prod = a * b;
    auto red = reduce_degree(mul_full(a, b), n - 1 < 1 ? 1 : n - 1);
    auto sq = compose(ElemFn::pow(RationalExp(1, 2)), pos);
    auto p32 = compose(ElemFn::pow(RationalExp(3, 2)), pos);
    auto lg = compose(ElemFn::log(), pos);
    auto ex = compose(ElemFn::exp(), a);
    auto sn = compose(ElemFn::sin(), a);
    auto sp = compose(ElemFn::sinpi(), a);
    auto rc = compose(ElemFn::recip(), pos);
    for (int s = 0; s < 5; ++s) {
      double x = sample(d);
      Interval X(x);
      mp ax = mid_eval(a, mp(x)), bx = mid_eval(b, mp(x)), px = ax + 3;
      bad += !oracle::inside(eval(sum, X), ax + bx);
      bad += !oracle::inside(eval(diff, X), ax - bx);
      bad += !oracle::inside(eval(prod, X), ax * bx);
      bad += !oracle::inside(eval(red, X), ax * bx);
      bad += !oracle::inside(eval(sq, X), boost::multiprecision::sqrt(px));
      bad += !oracle::inside(eval(p32, X), boost::multiprecision::pow(px, mp(1.5)));
      bad += !oracle::inside(eval(lg, X), boost::multiprecision::log(px));
      bad += !oracle::inside(eval(ex, X), boost::multiprecision::exp(ax));
      bad += !oracle::inside(eval(sn, X), boost::multiprecision::sin(ax));
      bad += !oracle::inside(eval(sp, X), boost::multiprecision::sin(oracle::pi() * ax));
      bad += !oracle::inside(eval(rc, X), 1 / px);
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("reduction never shrinks the set") {
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto u = random_model(9, Interval(-1.0, 1.0), 1e-3);
    auto r = reduce_degree(u, 1 + trial % 8);
    for (int s = 0; s < 5; ++s) {
      double x = sample(u.domain());
      bad += !oracle::inside(eval(r, Interval(x)), mid_eval(u, mp(x)));
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("affine fast path matches the generic composition") {
  for (int mode : {1, 3, 7, 13, 31}) {
    const Interval d(-1.0, 1.0);
    auto u = PowerSeries1D::affine(Interval(mode * 0.40625), Interval(mode * 0.015625), 10, d);
    auto fast = compose(ElemFn::sinpi(), u);
    // Same model with the affine structure hidden by a zero-width perturbation.
    auto slow_in = u;
    slow_in[3] = Interval(detail::next_down(0.0), 0.0);
    auto slow = compose(ElemFn::sinpi(), slow_in);
    for (int i = 0; i <= 10; ++i) CHECK(slow[i].overlaps(fast[i]));
    for (int s = 0; s < 20; ++s) {
      double t = sample(d);
      mp v = boost::multiprecision::sin(oracle::pi() * (mp(mode * 0.40625) + mp(mode * 0.015625) * t));
      CHECK(oracle::inside(eval(fast, Interval(t)), v));
    }
    // Only the remainder coefficient carries real width.
    double b = M_PI * mode * 0.015625;
    CHECK(fast[10].width() <= 2.0 * std::pow(b, 10) / 3628800.0 * 1.01 + 1e-15);
    for (int i = 0; i < 10; ++i) CHECK(fast[i].width() < 1e-14);
  }
}

TEST_CASE("2D tensor, range, composition") {
  const Interval d(0.0, 1.0);
  auto x = PowerSeries1D::variable(3, d);
  auto xy = PowerSeries2D::tensor(x, x);
  CHECK(xy(1, 1) == Interval(1.0));
  CHECK(range(xy).contains(Interval(0.0, 1.0)));

  auto sx = compose(ElemFn::sinpi(), PowerSeries1D::affine(Interval(0.25), Interval(0.125), 8, Interval(-1.0, 1.0)));
  auto t = PowerSeries2D::tensor(sx, sx);
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) CHECK(t(i, j) == sx[i] * sx[j]);

  int bad = 0;
  const Interval dx(-0.5, 0.5), dy(0.0, 0.25);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + trial % 5;
    auto a = random_model2(n, dx, dy, 1e-7), b = random_model2(n, dx, dy, 1e-7);
    auto pos = a + Interval(2.5);
    auto sum = a + b, prod = a * b;
    auto rt = compose(ElemFn::pow(RationalExp(1, 2)), pos);
    auto p32 = compose(ElemFn::pow(RationalExp(3, 2)), pos);
    for (int s = 0; s < 10; ++s) {
      double xs = sample(dx), ys = sample(dy);
      mp ax = mid_eval(a, mp(xs), mp(ys)), bx = mid_eval(b, mp(xs), mp(ys));
      bad += !oracle::inside(eval(sum, xs, ys), ax + bx);
      bad += !oracle::inside(eval(prod, xs, ys), ax * bx);
      bad += !oracle::inside(eval(rt, xs, ys), boost::multiprecision::sqrt(ax + mp(2.5)));
      bad += !oracle::inside(eval(p32, xs, ys), boost::multiprecision::pow(ax + mp(2.5), mp(1.5)));
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("pow composition agrees with interval pow on the range") {
  for (int trial = 0; trial < 50; ++trial) {
    auto u = random_model(6, Interval(0.0, 0.2), 1e-8) + Interval(2.0);
    Interval R = range(u);
    auto c = compose(ElemFn::pow(RationalExp(1, 2)), u);
    Interval rc = range(c), rp = pow(R, RationalExp(1, 2));
    double slack = rc.width();
    CHECK(rc.lo() >= rp.lo() - slack);
    CHECK(rc.hi() <= rp.hi() + slack);
  }
}
