#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "semilin/galerkin.hpp"
#include "semilin/psa.hpp"

namespace semilin {

// Which of the two vanishing edges (x = 0, y = 0 of the canonical quadrant)
// a rectangle touches: S11 both, S01 only the lower, S10 only the left.
enum class RectClass { S11, S01, S10, S00 };

const char* to_string(RectClass c);

// Axis-parallel rectangle with dyadic endpoints. Local coordinates: along an
// edge-anchored axis x = scale * t with t in [0, 1]; otherwise
// x = origin + scale * t with t in [-1, 1].
struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  int depth = 0;

  Rect() = default;
  Rect(double ax, double bx, double ay, double by, int d = 0);

  RectClass cls() const;
  bool anchored_x() const { return x0 == 0; }
  bool anchored_y() const { return y0 == 0; }
  double origin_x() const { return anchored_x() ? 0.0 : 0.5 * (x0 + x1); }
  double origin_y() const { return anchored_y() ? 0.0 : 0.5 * (y0 + y1); }
  double scale_x() const { return anchored_x() ? x1 : 0.5 * (x1 - x0); }
  double scale_y() const { return anchored_y() ? y1 : 0.5 * (y1 - y0); }
  Interval domain_x() const { return anchored_x() ? Interval(0.0, 1.0) : Interval(-1.0, 1.0); }
  Interval domain_y() const { return anchored_y() ? Interval(0.0, 1.0) : Interval(-1.0, 1.0); }
  std::pair<Rect, Rect> split(bool along_x) const;
};

struct QuadConfig {
  int grid = 16;           // cells per quadrant edge
  int degree = 6;          // PSA degree of the integration models
  int max_depth = 12;      // bisection limit per base cell
  double rel_tol = 1e-6;   // target relative width of the power model per cell
  int workers = 0;         // 0: available parallelism
};

// One of the four quadrants [0,1/2]^2 reflected: x -> 1 - x and/or y -> 1 - y.
struct Quadrant {
  bool flip_x = false, flip_y = false;
  static std::array<Quadrant, 4> all() { return {{{false, false}, {true, false}, {false, true}, {true, true}}}; }
  // sin(i pi (1 - x)) = (-1)^{i+1} sin(i pi x)
  int sign(int i, int j) const {
    int s = 1;
    if (flip_x && i % 2 == 0) s = -s;
    if (flip_y && j % 2 == 0) s = -s;
    return s;
  }
};

// Series pulled back to the canonical quadrant.
FourierApproximation reflect(const FourierApproximation& u, Quadrant q);

// 1D model of sin(m pi (origin + scale t)) with explicit remainder.
PowerSeries1D sine_model(int mode, double origin, double scale, const Interval& domain, int degree);

// Model of eta in the local coordinates of r, expanded at the class-specific
// point (corner, edge midpoint or center).
PowerSeries2D enclose_on_rect(const FourierApproximation& eta, const Rect& r, int degree);

// Integral of coeff * t^ex * s^ey over dx x dy, split into constant-sign
// pieces so an interval coefficient never multiplies a sign-changing integral.
Interval integrate_monomial(const Interval& coeff, RationalExp ex, RationalExp ey, const Interval& dx,
                            const Interval& dy);
Interval integrate_monomial_1d(const Interval& coeff, RationalExp e, const Interval& d);

// Integral over r of eta^q xi, both given as models in the local coordinates
// of r. The class monomial is factored out of eta first; throws
// PositivityError when the reduced model is not strictly positive.
Interval integrate_rect(const PowerSeries2D& eta_model, const PowerSeries2D& xi_model, RationalExp q, const Rect& r);

// Verified integration of eta^q xi over the unit square for a fixed sine
// series eta, positive inside and zero on the boundary. Construction
// subdivides each quadrant until the reduced models are positive and tight;
// the per-cell composition data are kept for all later integrals.
class PowerIntegrator {
 public:
  PowerIntegrator(const FourierApproximation& eta, const QuadConfig& cfg);
  ~PowerIntegrator();
  PowerIntegrator(PowerIntegrator&&) noexcept;

  // Integral of eta^q xi with xi = sum c_ij phi_ij (c indexed (i-1, j-1)).
  Interval integral_power(const IMatrix& xi, RationalExp q) const;
  Interval integral_power(const FourierApproximation& xi, RationalExp q) const;
  // Integral of eta^q.
  Interval integral_power_unit(RationalExp q) const;
  // Contributions of the four quadrants, in Quadrant::all() order.
  std::array<Interval, 4> quadrant_integrals(const FourierApproximation& xi, RationalExp q) const;
  // Entries (factor * eta^q phi_a, phi_b).
  IMatrix weighted_gram(const std::vector<std::pair<int, int>>& basis, RationalExp q,
                        const Interval& factor) const;

  // Enclosure of max eta over the square, refined near the maximiser.
  Interval max_enclosure(int rounds = 12) const;
  // Enclosure of min eta over the closed square (0 once positivity is verified).
  Interval min_enclosure() const;
  // Largest verified lower bound of eta over a single cell, and that cell.
  std::pair<Interval, Rect> positivity_witness() const;

  std::size_t cell_count() const;
  const std::vector<Rect>& cells(int quadrant) const;
  const FourierApproximation& eta() const;
  const QuadConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Interval integral_power(const FourierApproximation& eta, const FourierApproximation& xi, RationalExp q,
                        const QuadConfig& cfg);

// ||Delta u + u^p||_{L^2} for u > 0 inside.
Interval residual_l2(const PowerIntegrator& in, RationalExp p);
Interval residual_l2(const FourierApproximation& u, RationalExp p, const QuadConfig& cfg);
// Integral of u^3, exact through sine triple products.
Interval cube_integral(const FourierApproximation& u);
// (p u^{p-1} phi_a, phi_b).
IMatrix weighted_gram(const PowerIntegrator& in, RationalExp p, const std::vector<std::pair<int, int>>& basis);
// p (max u)^{p-1}.
Interval sup_weight(const PowerIntegrator& in, RationalExp p);

}  // namespace semilin
