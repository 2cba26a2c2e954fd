#pragma once

#include <Eigen/Core>

#include "semilin/interval.hpp"

namespace Eigen {

template <>
struct NumTraits<semilin::Interval> : GenericNumTraits<double> {
  using Real = semilin::Interval;
  using NonInteger = semilin::Interval;
  using Nested = semilin::Interval;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 12,
    MulCost = 20
  };
  static inline Real epsilon() { return semilin::Interval(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return semilin::Interval(1e-12); }
  static inline Real highest() { return semilin::Interval(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return semilin::Interval(std::numeric_limits<double>::lowest()); }
  static inline int digits10() { return 15; }
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<semilin::Interval, double, BinaryOp> {
  using ReturnType = semilin::Interval;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, semilin::Interval, BinaryOp> {
  using ReturnType = semilin::Interval;
};

}  // namespace Eigen

namespace semilin {

using IVector = Eigen::Matrix<Interval, Eigen::Dynamic, 1>;
using IMatrix = Eigen::Matrix<Interval, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
Eigen::MatrixXd mid(const Eigen::MatrixBase<Derived>& m) {
  return m.unaryExpr([](const Interval& x) { return x.mid(); });
}

template <typename Derived>
Eigen::MatrixXd mag(const Eigen::MatrixBase<Derived>& m) {
  return m.unaryExpr([](const Interval& x) { return x.mag(); });
}

template <typename Derived>
auto to_interval(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<Interval>();
}

// Upper bound on the spectral norm: sqrt(||M||_1 ||M||_inf) with |M| entrywise.
double norm2_upper(const IMatrix& m);

}  // namespace semilin
