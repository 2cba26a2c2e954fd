#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "semilin/interval.hpp"

namespace semilin {

// u(x, y) = sum a_ij sin(i pi x) sin(j pi y), 1 <= i, j <= max_mode.
// Coefficient (i, j) is stored at (i-1, j-1).
class FourierApproximation {
 public:
  FourierApproximation() = default;
  explicit FourierApproximation(int max_mode);
  explicit FourierApproximation(Eigen::MatrixXd coeffs);

  static FourierApproximation single(int i, int j, double a);

  int max_mode() const { return static_cast<int>(a_.rows()); }
  double operator()(int i, int j) const;
  void set(int i, int j, double a);
  const Eigen::MatrixXd& coeffs() const { return a_; }

  // All coefficients with an even index vanish, so u is symmetric about
  // x = 1/2 and y = 1/2.
  bool odd_only() const;
  // Indices i with a nonzero coefficient in row i (resp. column j).
  std::vector<int> active_x() const;
  std::vector<int> active_y() const;
  // Same series padded or truncated to a new maximal mode.
  FourierApproximation resized(int max_mode) const;

 private:
  Eigen::MatrixXd a_;
};

// Coefficients of Delta u: -(i^2 + j^2) pi^2 a_ij, rounded to binary64.
FourierApproximation laplacian(const FourierApproximation& u);
// ||u||_{L^2} = (sum a_ij^2 / 4)^{1/2}.
double l2_norm(const FourierApproximation& u);
Interval l2_norm_enclosure(const FourierApproximation& u);
double eval(const FourierApproximation& u, double x, double y);
// Verified value at a point given as intervals.
Interval eval(const FourierApproximation& u, const Interval& x, const Interval& y);

// (grad phi_ij, grad phi_kl) = delta * (i^2 + j^2) pi^2 / 4. The rational
// factor is exact; stiffness_diag multiplies it by the enclosure of pi^2.
RationalExp stiffness_factor(int i, int j);
std::vector<Interval> stiffness_diag(const std::vector<std::pair<int, int>>& indices);

// Odd modes (i, j) with i, j <= n, ordered by i then j.
std::vector<std::pair<int, int>> odd_modes(int n);

// Plain exchange formats: JSON {"max_mode": N, "coefficients": [[i, j, a], ...]}
// or text lines "i j a". The format follows the file extension.
void save_coefficients(const FourierApproximation& u, const std::string& path);
FourierApproximation load_coefficients(const std::string& path);
std::string coefficients_to_json(const FourierApproximation& u);
FourierApproximation coefficients_from_json(const std::string& text);

struct GalerkinConfig {
  int max_mode = 60;
  RationalExp p{3, 2};
  double tolerance = 1e-12;  // relative to ||K a||
  int max_iterations = 60;
  int points_per_panel = 8;  // Gauss-Legendre order on each panel
  std::optional<FourierApproximation> initial;
};

struct GalerkinReport {
  FourierApproximation u;
  int iterations = 0;
  double residual = 0;  // relative Galerkin residual
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last) : std::runtime_error(what), last_(last) {}
  double last_residual() const { return last_; }

 private:
  double last_;
};

// Newton iteration for the odd-mode Galerkin system of -Delta u = |u|^{p-1} u.
GalerkinReport newton_iterate(const GalerkinConfig& cfg);
// As above, but throws SolverError when the iteration does not converge.
FourierApproximation newton_solve(const GalerkinConfig& cfg);
// Relative Galerkin residual ||K a - N(a)|| / ||K a|| with its own quadrature.
double galerkin_residual(const FourierApproximation& u, RationalExp p, int points_per_panel = 12);
// One-mode estimate a_11 with a (pi^2/2) = a^p int phi^{p+1}.
double one_mode_amplitude(RationalExp p);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace semilin
