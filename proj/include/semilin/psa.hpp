#pragma once

#include <vector>

#include "semilin/interval_eigen.hpp"

namespace semilin {

// Raised when a composition would leave the domain of the outer function;
// carries the enclosure of the inner range that failed.
class PositivityError : public DomainError {
 public:
  PositivityError(const std::string& what, Interval range) : DomainError(what), range_(range) {}
  const Interval& range() const { return range_; }

 private:
  Interval range_;
};

// Elementary outer functions for composition.
class ElemFn {
 public:
  enum class Kind { Pow, Log, Exp, Sin, SinPi, Recip };

  static ElemFn pow(RationalExp q) { return ElemFn(Kind::Pow, q); }
  static ElemFn log() { return ElemFn(Kind::Log); }
  static ElemFn exp() { return ElemFn(Kind::Exp); }
  static ElemFn sin() { return ElemFn(Kind::Sin); }
  static ElemFn sinpi() { return ElemFn(Kind::SinPi); }
  static ElemFn recip() { return ElemFn(Kind::Recip); }

  Kind kind() const { return kind_; }
  RationalExp exponent() const { return q_; }

  // Throws PositivityError when t leaves the domain.
  void check_domain(const Interval& t) const;
  // f^(i)(t)/i! for i = 0..order, enclosed over t.
  std::vector<Interval> taylor(const Interval& t, int order) const;
  Interval taylor_coeff(const Interval& t, int i) const;

 private:
  explicit ElemFn(Kind k, RationalExp q = RationalExp(1)) : kind_(k), q_(q) {}
  Kind kind_;
  RationalExp q_;
};

// u(x) = sum_i c_i x^i on a domain D; the top coefficient absorbs the tail,
// so membership is pointwise over D.
class PowerSeries1D {
 public:
  PowerSeries1D() = default;
  PowerSeries1D(IVector coeffs, Interval domain);

  static PowerSeries1D constant(const Interval& c, int degree, const Interval& domain);
  // The identity u(x) = x.
  static PowerSeries1D variable(int degree, const Interval& domain);
  // u(x) = a + b x, exact coefficients.
  static PowerSeries1D affine(const Interval& a, const Interval& b, int degree, const Interval& domain);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Interval& domain() const { return dom_; }
  const IVector& coeffs() const { return c_; }
  IVector& coeffs() { return c_; }
  const Interval& operator[](int i) const { return c_[i]; }
  Interval& operator[](int i) { return c_[i]; }

 private:
  IVector c_;
  Interval dom_;
};

PowerSeries1D operator+(const PowerSeries1D& a, const PowerSeries1D& b);
PowerSeries1D operator-(const PowerSeries1D& a, const PowerSeries1D& b);
PowerSeries1D operator*(const PowerSeries1D& a, const PowerSeries1D& b);
PowerSeries1D operator*(const Interval& s, const PowerSeries1D& a);
PowerSeries1D operator+(const PowerSeries1D& a, const Interval& s);

// Product without reduction (degree da + db).
PowerSeries1D mul_full(const PowerSeries1D& a, const PowerSeries1D& b);
// Fold coefficients above n into degree n with a Horner range of the tail.
PowerSeries1D reduce_degree(const PowerSeries1D& u, int n);
// Horner enclosure of the range over the domain.
Interval range(const PowerSeries1D& u);
// Horner evaluation at x, which should lie in the domain.
Interval eval(const PowerSeries1D& u, const Interval& x);
// f o u with Taylor expansion at the midpoint of the constant coefficient.
PowerSeries1D compose(const ElemFn& f, const PowerSeries1D& u);

// Bivariate series with per-variable degree n: coefficient (i, j) multiplies
// x^i y^j. Row n absorbs the x-tail, entry (i, n) the y-tail of row i.
class PowerSeries2D {
 public:
  PowerSeries2D() = default;
  PowerSeries2D(IMatrix coeffs, Interval dx, Interval dy);

  static PowerSeries2D constant(const Interval& c, int degree, const Interval& dx, const Interval& dy);
  // a(x) b(y) as a bivariate series.
  static PowerSeries2D tensor(const PowerSeries1D& a, const PowerSeries1D& b);

  int degree() const { return static_cast<int>(c_.rows()) - 1; }
  const Interval& dx() const { return dx_; }
  const Interval& dy() const { return dy_; }
  const IMatrix& coeffs() const { return c_; }
  IMatrix& coeffs() { return c_; }
  const Interval& operator()(int i, int j) const { return c_(i, j); }
  Interval& operator()(int i, int j) { return c_(i, j); }

 private:
  IMatrix c_;
  Interval dx_, dy_;
};

PowerSeries2D operator+(const PowerSeries2D& a, const PowerSeries2D& b);
PowerSeries2D operator-(const PowerSeries2D& a, const PowerSeries2D& b);
PowerSeries2D operator*(const PowerSeries2D& a, const PowerSeries2D& b);
PowerSeries2D operator*(const Interval& s, const PowerSeries2D& a);
PowerSeries2D operator+(const PowerSeries2D& a, const Interval& s);

// Full product as a (da+db+1)^2 coefficient matrix, no reduction.
IMatrix mul_full(const PowerSeries2D& a, const PowerSeries2D& b);
// Fold a full coefficient matrix to per-variable degree n.
PowerSeries2D reduce_degree(const IMatrix& full, int n, const Interval& dx, const Interval& dy);
Interval range(const PowerSeries2D& u);
Interval eval(const PowerSeries2D& u, const Interval& x, const Interval& y);
PowerSeries2D compose(const ElemFn& f, const PowerSeries2D& u);

// Pieces of a composition that do not depend on the outer function, so one
// set of powers serves several exponents.
struct CompositionBasis {
  double u0 = 0;               // expansion point
  Interval hull;               // hull(u0, range(u))
  std::vector<PowerSeries2D> powers;  // v^1 .. v^n with v = u - u0
};
CompositionBasis composition_basis(const PowerSeries2D& u);
PowerSeries2D compose(const ElemFn& f, const CompositionBasis& basis);

// Horner range of sum_i c_i x^i over d.
Interval horner(const IVector& c, const Interval& d);

}  // namespace semilin
