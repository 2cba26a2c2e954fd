#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semilin/quad.hpp"

namespace semilin {

// A verification step could not be completed (indefinite pencil, an
// eigenvalue enclosure too close to 1, ...).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Discrete problem (grad u, grad v) = lambda (p |u_hat|^{p-1} u, v) on a sine
// basis: A diagonal stiffness, B weighted Gram matrix.
struct Pencil {
  std::vector<std::pair<int, int>> basis;
  IVector A;
  IMatrix B;
  int dim() const { return static_cast<int>(basis.size()); }
};

// Odd (i, j) with i, j <= n, the reflection-symmetric part of the span.
std::vector<std::pair<int, int>> symmetric_basis(int n);

Pencil assemble_pencil(const PowerIntegrator& in, RationalExp p, int n);
Pencil assemble_pencil(const FourierApproximation& u, RationalExp p, int n, const QuadConfig& sub);

// Enclosures of the discrete eigenvalues in increasing order. Throws
// VerificationError when B is not verifiably positive definite.
std::vector<Interval> verified_discrete_eigs(const Pencil& P);

struct EigenEnclosure {
  std::vector<Interval> discrete;  // lambda_k^N
  std::vector<Interval> lambda;    // [lower bound, Rayleigh-Ritz upper bound]
  Interval c_n;
  Interval sup_weight;
};

// 1 / ((n + 1) pi)
Interval projection_constant(int n);

EigenEnclosure two_sided_bounds(const std::vector<Interval>& discrete, const Interval& c_n, const Interval& sup_w);

// Upper bound K on the inverse of the linearisation from mu_0 = min |1 - 1/lambda|.
// With a tail threshold, the largest lower bound must reach it and the
// eigenvalues beyond the computed range contribute 1 - 1/lambda_dim; without
// one the enclosures are taken as the whole spectrum.
struct KBound {
  Interval K;
  Interval mu0;
  int argmin = -1;  // index of the minimising eigenvalue, -1 for the tail or 1
};
KBound compute_K(const EigenEnclosure& e, std::optional<double> tail_threshold = 2.0);

std::string pencil_to_json(const Pencil& P);

}  // namespace semilin
