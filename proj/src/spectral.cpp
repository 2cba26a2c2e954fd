#include "semilin/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace semilin {

std::vector<std::pair<int, int>> symmetric_basis(int n) {
  if (n < 1) throw UsageError("eigen basis size must be >= 1");
  return odd_modes(n);
}

Pencil assemble_pencil(const PowerIntegrator& in, RationalExp p, int n) {
  Pencil P;
  P.basis = symmetric_basis(n);
  auto d = stiffness_diag(P.basis);
  P.A = IVector(P.dim());
  for (int k = 0; k < P.dim(); ++k) P.A[k] = d[k];
  P.B = weighted_gram(in, p, P.basis);
  return P;
}

Pencil assemble_pencil(const FourierApproximation& u, RationalExp p, int n, const QuadConfig& sub) {
  return assemble_pencil(PowerIntegrator(u, sub), p, n);
}

std::vector<Interval> verified_discrete_eigs(const Pencil& P) {
  const int n = P.dim();
  if (n == 0 || P.A.size() != n || P.B.rows() != n || P.B.cols() != n) throw UsageError("pencil: inconsistent sizes");
  // B v = sigma A v  <=>  S w = sigma w with S = D B D, D = A^{-1/2}
  IVector D(n);
  for (int k = 0; k < n; ++k) {
    if (!(P.A[k].lo() > 0)) throw VerificationError("pencil: stiffness diagonal not positive");
    D[k] = Interval(1.0) / sqrt(P.A[k]);
  }
  IMatrix S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      if (!P.B(i, j).overlaps(P.B(j, i))) throw VerificationError("pencil: B is not symmetric");
      S(i, j) = S(j, i) = D[i] * intersect(P.B(i, j), P.B(j, i)) * D[j];
    }
  Eigen::MatrixXd Sm = mid(S);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sm);
  if (es.info() != Eigen::Success) throw VerificationError("pencil: midpoint eigensolver failed");
  const Eigen::MatrixXd& Q = es.eigenvectors();
  const Eigen::VectorXd& d = es.eigenvalues();

  // T = Q^T S Q, F = Q^T Q - I, both enclosed
  IMatrix SQ(n, n), T(n, n), F(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval s(0.0);
      for (int k = 0; k < n; ++k) s += S(i, k) * Q(k, j);
      SQ(i, j) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval t(0.0), f(0.0);
      for (int k = 0; k < n; ++k) {
        t += SQ(k, j) * Q(k, i);
        f += Interval(Q(k, i)) * Q(k, j);
      }
      T(i, j) = i == j ? t - d[i] : t;
      F(i, j) = i == j ? f - 1 : f;
    }
  // Weyl for Q^T S Q against diag(d); Ostrowski for the congruence by Q.
  const double eps = norm2_upper(T), phi = norm2_upper(F);
  if (!(phi < 0.5)) throw VerificationError("pencil: eigenvector basis too far from orthogonal");
  const Interval scale_lo = Interval(1.0) + phi, scale_hi = Interval(1.0) - phi;
  std::vector<Interval> sigma(n);
  for (int k = 0; k < n; ++k) {
    double lo = ((Interval(d[k]) - eps) / scale_lo).lo();
    double hi = ((Interval(d[k]) + eps) / scale_hi).hi();
    if (!(lo > 0)) throw VerificationError("pencil: B is not verifiably positive definite");
    sigma[k] = Interval(lo, hi);
  }
  std::vector<Interval> lambda(n);
  for (int k = 0; k < n; ++k) lambda[k] = Interval(1.0) / sigma[n - 1 - k];
  return lambda;
}

Interval projection_constant(int n) {
  if (n < 1) throw UsageError("projection_constant: n must be >= 1");
  return Interval(1.0) / (Interval(n + 1) * pi());
}

EigenEnclosure two_sided_bounds(const std::vector<Interval>& discrete, const Interval& c_n, const Interval& sup_w) {
  if (!(c_n.lo() > 0)) throw UsageError("two_sided_bounds: C_N must be positive");
  if (sup_w.lo() < 0) throw UsageError("two_sided_bounds: weight bound must be nonnegative");
  EigenEnclosure e;
  e.discrete = discrete;
  e.c_n = c_n;
  e.sup_weight = sup_w;
  const Interval c2w = sqr(Interval(c_n.hi())) * sup_w.hi();
  const int n = static_cast<int>(discrete.size());
  std::vector<double> lo(n), hi(n);
  for (int k = 0; k < n; ++k) {
    Interval l(discrete[k].lo());
    lo[k] = (l / (l * c2w + 1)).lo();
    hi[k] = discrete[k].hi();
  }
  // the exact eigenvalues are ordered, so bounds carry over to neighbours
  for (int k = 1; k < n; ++k) lo[k] = std::max(lo[k], lo[k - 1]);
  for (int k = n - 2; k >= 0; --k) hi[k] = std::min(hi[k], hi[k + 1]);
  for (int k = 0; k < n; ++k) e.lambda.emplace_back(lo[k], hi[k]);
  return e;
}

namespace {
// inf |1 - 1/lambda| over the enclosure, 0 if it cannot be separated from 1.
double inf_abs_mu(const Interval& l) {
  if (!(l.lo() > 0)) return 0.0;
  if (l.lo() > 1) return (Interval(1.0) - Interval(1.0) / l.lo()).lo();
  if (l.hi() < 1) return (Interval(1.0) / l.hi() - 1).lo();
  return 0.0;
}
}  // namespace

KBound compute_K(const EigenEnclosure& e, std::optional<double> tail_threshold) {
  if (e.lambda.empty()) throw UsageError("compute_K: no eigenvalues");
  KBound r;
  double mu0 = 1.0;
  for (std::size_t k = 0; k < e.lambda.size(); ++k) {
    double m = inf_abs_mu(e.lambda[k]);
    if (!(m > 0))
      throw VerificationError("eigenvalue enclosure " + to_string(e.lambda[k]) +
                              " cannot be separated from 1; K cannot be established at this size");
    if (m < mu0) {
      mu0 = m;
      r.argmin = static_cast<int>(k);
    }
  }
  if (tail_threshold) {
    const double last = e.lambda.back().lo();
    if (!(last >= *tail_threshold))
      throw VerificationError("largest eigenvalue lower bound " + std::to_string(last) + " below the tail threshold " +
                              std::to_string(*tail_threshold));
    double tail = inf_abs_mu(Interval(last, std::max(last, e.lambda.back().hi())));
    if (tail < mu0) {
      mu0 = tail;
      r.argmin = -1;
    }
  }
  r.mu0 = Interval(mu0);
  r.K = Interval(1.0) / r.mu0;
  return r;
}

std::string pencil_to_json(const Pencil& P) {
  nlohmann::json j;
  auto pair = [](const Interval& x) { return nlohmann::json::array({x.lo(), x.hi()}); };
  j["basis"] = nlohmann::json::array();
  for (auto [a, b] : P.basis) j["basis"].push_back({a, b});
  j["A"] = nlohmann::json::array();
  for (int k = 0; k < P.dim(); ++k) j["A"].push_back(pair(P.A[k]));
  j["B"] = nlohmann::json::array();
  for (int a = 0; a < P.dim(); ++a) {
    auto row = nlohmann::json::array();
    for (int b = 0; b < P.dim(); ++b) row.push_back(pair(P.B(a, b)));
    j["B"].push_back(row);
  }
  return j.dump(1);
}

}  // namespace semilin
