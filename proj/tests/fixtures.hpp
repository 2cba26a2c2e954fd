#pragma once

// Random data and reference computations shared by the unit tests and the
// acceptance run.

#include <vector>

#include "oracle.hpp"
#include "semilin/spectral.hpp"

namespace fixtures {

using oracle::mp;
using namespace semilin;

inline oracle::SineSum sine_sum(const FourierApproximation& u) {
  oracle::SineSum s;
  for (int i = 1; i <= u.max_mode(); ++i)
    for (int j = 1; j <= u.max_mode(); ++j)
      if (u(i, j) != 0) {
        s.ix.push_back(i);
        s.iy.push_back(j);
        s.a.push_back(u(i, j));
      }
  return s;
}

// Positive odd-mode perturbation of sin(pi x) sin(pi y): |sin(m pi x)| <= m sin(pi x)
// near the edges, so sum |c_ij| i j < 1 keeps it positive.
inline FourierApproximation random_positive(int max_mode, double budget) {
  FourierApproximation u(max_mode);
  u.set(1, 1, 1.0);
  std::vector<std::pair<int, int>> modes;
  for (auto m : odd_modes(max_mode))
    if (m != std::pair{1, 1}) modes.push_back(m);
  double share = budget / modes.size();
  for (auto [i, j] : modes) u.set(i, j, oracle::uniform(-share, share) / (i * j));
  return u;
}

inline FourierApproximation random_series(int max_mode) {
  FourierApproximation u(max_mode);
  for (int i = 1; i <= max_mode; ++i)
    for (int j = 1; j <= max_mode; ++j) u.set(i, j, oracle::uniform(-1, 1) / (i * j));
  return u;
}

// Number of eigenvalues of A v = lambda B v below t: negative pivots of A - t B
// (Sylvester's law of inertia), in 50-digit arithmetic.
inline int count_below(const std::vector<mp>& A, const std::vector<std::vector<mp>>& B, const mp& t) {
  const int n = static_cast<int>(A.size());
  std::vector<std::vector<mp>> M(n, std::vector<mp>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = (i == j ? A[i] : mp(0)) - t * B[i][j];
  int neg = 0;
  for (int k = 0; k < n; ++k) {
    if (M[k][k] < 0) ++neg;
    for (int i = k + 1; i < n; ++i) {
      mp f = M[i][k] / M[k][k];
      for (int j = k; j < n; ++j) M[i][j] -= f * M[k][j];
    }
  }
  return neg;
}

// Eigenvalues of the midpoint pencil by bisection on the inertia count.
inline std::vector<mp> oracle_eigs(const Pencil& P) {
  const int n = P.dim();
  std::vector<mp> A(n);
  std::vector<std::vector<mp>> B(n, std::vector<mp>(n));
  for (int i = 0; i < n; ++i) {
    A[i] = mp(P.A[i].mid());
    for (int j = 0; j < n; ++j) B[i][j] = mp(P.B(i, j).mid());
  }
  std::vector<mp> out;
  for (int k = 0; k < n; ++k) {
    mp lo = 0, hi = 1;
    while (count_below(A, B, hi) <= k) hi *= 2;
    for (int it = 0; it < 140; ++it) {
      mp m = (lo + hi) / 2;
      (count_below(A, B, m) <= k ? lo : hi) = m;
    }
    out.push_back((lo + hi) / 2);
  }
  return out;
}

inline Pencil random_pencil(int n, double widen = 0) {
  Pencil P;
  for (int k = 0; k < n; ++k) P.basis.emplace_back(2 * k + 1, 1);
  P.A = IVector(n);
  for (int k = 0; k < n; ++k) P.A[k] = Interval(oracle::uniform(0.5, 40.0));
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) L(i, j) = oracle::uniform(-1, 1);
  Eigen::MatrixXd B = L * L.transpose() + 0.05 * Eigen::MatrixXd::Identity(n, n);
  P.B = IMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double w = widen * std::fabs(B(i, j));
      P.B(i, j) = P.B(j, i) = Interval(B(i, j) - w, B(i, j) + w);
    }
  return P;
}

}  // namespace fixtures
