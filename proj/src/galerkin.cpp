#include "semilin/galerkin.hpp"

#include <cmath>
#include <numbers>

namespace semilin {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    double w = 2 / ((1 - x * x) * dp * dp);
    nodes[k] = -x;
    nodes[n - 1 - k] = x;
    weights[k] = weights[n - 1 - k] = w;
  }
}

namespace {

// Composite Gauss rule on [0, 1/2] with geometric grading towards 0, where
// |u|^p behaves like a fractional power of the distance to the boundary.
struct HalfRule {
  std::vector<double> x, w;
};

HalfRule half_rule(int panels, int order) {
  std::vector<double> gn, gw;
  gauss_legendre(order, gn, gw);
  std::vector<double> edges;
  const double h = 0.5 / panels;
  const int grading = 6;
  edges.push_back(0.0);
  for (int g = grading; g >= 1; --g) edges.push_back(h * std::ldexp(1.0, -g));
  for (int k = 1; k <= panels; ++k) edges.push_back(k * h);
  HalfRule r;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    double a = edges[e], b = edges[e + 1], c = 0.5 * (a + b), s = 0.5 * (b - a);
    for (int q = 0; q < order; ++q) {
      r.x.push_back(c + s * gn[q]);
      r.w.push_back(s * gw[q]);
    }
  }
  return r;
}

struct System {
  std::vector<int> modes;  // odd modes 1, 3, ...
  HalfRule rule;
  Eigen::MatrixXd S;  // S(a, q) = sin(m_a pi x_q)
  Eigen::VectorXd w;
  Eigen::VectorXd K;  // stiffness (i^2 + j^2) pi^2 / 4, flattened (i, j) -> i * nm + j
  double p;

  System(int max_mode, RationalExp pe, int order) : p(pe.to_double()) {
    for (int i = 1; i <= max_mode; i += 2) modes.push_back(i);
    const int nm = static_cast<int>(modes.size());
    rule = half_rule(std::max(4, (max_mode + 1) / 2), order);
    const int Q = static_cast<int>(rule.x.size());
    S.resize(nm, Q);
    w = Eigen::Map<Eigen::VectorXd>(rule.w.data(), Q);
    for (int a = 0; a < nm; ++a)
      for (int q = 0; q < Q; ++q) S(a, q) = std::sin(modes[a] * std::numbers::pi * rule.x[q]);
    K.resize(nm * nm);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    for (int a = 0; a < nm; ++a)
      for (int b = 0; b < nm; ++b) K[a * nm + b] = (modes[a] * modes[a] + modes[b] * modes[b]) * pi2 / 4;
  }

  int nm() const { return static_cast<int>(modes.size()); }

  Eigen::MatrixXd values(const Eigen::MatrixXd& A) const { return S.transpose() * A * S; }

  // G(a) = K a - (|u|^{p-1} u, phi)
  Eigen::VectorXd residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& U) const {
    Eigen::MatrixXd F = U.unaryExpr([this](double u) { return std::pow(std::fabs(u), p - 1) * u; });
    Eigen::MatrixXd Wf = w.asDiagonal() * F * w.asDiagonal();
    Eigen::MatrixXd N = 4.0 * (S * Wf * S.transpose());
    Eigen::VectorXd g(nm() * nm());
    for (int a = 0; a < nm(); ++a)
      for (int b = 0; b < nm(); ++b) g[a * nm() + b] = K[a * nm() + b] * A(a, b) - N(a, b);
    return g;
  }

  Eigen::MatrixXd jacobian(const Eigen::MatrixXd& U) const {
    const int n = nm(), Q = static_cast<int>(w.size());
    Eigen::MatrixXd Gd = U.unaryExpr([this](double u) { return p * std::pow(std::fabs(u), p - 1); });
    // G(q, (j, l)) = sum_r w_r g(U_qr) S_j(r) S_l(r)
    Eigen::MatrixXd G(Q, n * n), P(Q, n * n);
    for (int q = 0; q < Q; ++q) {
      Eigen::VectorXd d = w.cwiseProduct(Gd.row(q).transpose());
      Eigen::MatrixXd T = S * d.asDiagonal() * S.transpose();
      G.row(q) = Eigen::Map<Eigen::RowVectorXd>(T.data(), n * n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) P(q, k * n + i) = w[q] * S(i, q) * S(k, q);
    }
    // Column-major flattening: T(j, l) sits at l * n + j, P likewise at k * n + i.
    Eigen::MatrixXd Jp = 4.0 * (P.transpose() * G);
    Eigen::MatrixXd J(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) J(i * n + j, k * n + l) = -Jp(k * n + i, l * n + j);
    for (int a = 0; a < n * n; ++a) J(a, a) += K[a];
    return J;
  }
};

double scale_of(const System& s, const Eigen::MatrixXd& A) {
  double r = 0;
  for (int a = 0; a < s.nm(); ++a)
    for (int b = 0; b < s.nm(); ++b) r += std::pow(s.K[a * s.nm() + b] * A(a, b), 2);
  return std::max(1.0, std::sqrt(r));
}

Eigen::MatrixXd odd_block(const FourierApproximation& u, const std::vector<int>& modes) {
  const int n = static_cast<int>(modes.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) A(a, b) = u(modes[a], modes[b]);
  return A;
}

FourierApproximation from_block(const Eigen::MatrixXd& A, const std::vector<int>& modes, int max_mode) {
  FourierApproximation u(max_mode);
  for (std::size_t a = 0; a < modes.size(); ++a)
    for (std::size_t b = 0; b < modes.size(); ++b) u.set(modes[a], modes[b], A(a, b));
  return u;
}

}  // namespace

double one_mode_amplitude(RationalExp p) {
  System s(1, p, 16);
  Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd U = s.values(one);
  const double pe = p.to_double();
  Eigen::MatrixXd F = U.unaryExpr([pe](double u) { return std::pow(u, pe + 1); });
  double integral = 4.0 * s.w.dot(F * s.w);
  return std::pow((std::numbers::pi * std::numbers::pi / 2) / integral, 1.0 / (pe - 1));
}

GalerkinReport newton_iterate(const GalerkinConfig& cfg) {
  if (cfg.max_mode < 1) throw UsageError("Galerkin: max_mode must be >= 1");
  if (!(cfg.tolerance > 0)) throw UsageError("Galerkin: tolerance must be positive");
  if (!(cfg.p > RationalExp(1))) throw UsageError("Galerkin: p must exceed 1");
  System s(cfg.max_mode, cfg.p, cfg.points_per_panel);
  const int n = s.nm();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  if (cfg.initial) {
    A = odd_block(*cfg.initial, s.modes);
  } else {
    A(0, 0) = one_mode_amplitude(cfg.p);
  }

  GalerkinReport rep;
  Eigen::MatrixXd U = s.values(A);
  Eigen::VectorXd g = s.residual(A, U);
  double res = g.norm() / scale_of(s, A);
  while (res > cfg.tolerance && rep.iterations < cfg.max_iterations) {
    Eigen::MatrixXd J = s.jacobian(U);
    Eigen::VectorXd step = J.partialPivLu().solve(-g);
    double t = 1.0, best = g.norm();
    Eigen::MatrixXd trial;
    Eigen::VectorXd gt;
    for (int half = 0; half < 12; ++half, t *= 0.5) {
      trial = A + t * Eigen::Map<const Eigen::MatrixXd>(step.data(), n, n).transpose();
      U = s.values(trial);
      gt = s.residual(trial, U);
      if (gt.norm() < best) break;
    }
    ++rep.iterations;
    if (!(gt.norm() < best)) break;
    A = trial;
    g = gt;
    res = g.norm() / scale_of(s, A);
  }
  rep.u = from_block(A, s.modes, cfg.max_mode);
  rep.residual = res;
  rep.converged = res <= cfg.tolerance;
  return rep;
}

FourierApproximation newton_solve(const GalerkinConfig& cfg) {
  GalerkinReport rep = newton_iterate(cfg);
  if (!rep.converged)
    throw SolverError("Galerkin Newton iteration did not converge (relative residual " +
                          std::to_string(rep.residual) + ")",
                      rep.residual);
  return rep.u;
}

double galerkin_residual(const FourierApproximation& u, RationalExp p, int points_per_panel) {
  int max_mode = u.max_mode();
  if (!u.odd_only()) throw UsageError("galerkin_residual: odd modes only");
  System s(max_mode, p, points_per_panel);
  Eigen::MatrixXd A = odd_block(u, s.modes);
  Eigen::VectorXd g = s.residual(A, s.values(A));
  return g.norm() / scale_of(s, A);
}

}  // namespace semilin
