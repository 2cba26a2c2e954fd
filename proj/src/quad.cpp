#include "semilin/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semilin/parallel.hpp"

namespace semilin {

const char* to_string(RectClass c) {
  switch (c) {
    case RectClass::S11: return "S11";
    case RectClass::S01: return "S01";
    case RectClass::S10: return "S10";
    case RectClass::S00: return "S00";
  }
  return "?";
}

Rect::Rect(double ax, double bx, double ay, double by, int d) : x0(ax), x1(bx), y0(ay), y1(by), depth(d) {
  if (!(ax >= 0 && ax < bx && ay >= 0 && ay < by)) throw UsageError("Rect: need 0 <= x0 < x1 and 0 <= y0 < y1");
}

RectClass Rect::cls() const {
  if (anchored_x() && anchored_y()) return RectClass::S11;
  if (anchored_y()) return RectClass::S01;
  if (anchored_x()) return RectClass::S10;
  return RectClass::S00;
}

std::pair<Rect, Rect> Rect::split(bool along_x) const {
  if (along_x) {
    double m = 0.5 * (x0 + x1);
    return {Rect(x0, m, y0, y1, depth + 1), Rect(m, x1, y0, y1, depth + 1)};
  }
  double m = 0.5 * (y0 + y1);
  return {Rect(x0, x1, y0, m, depth + 1), Rect(x0, x1, m, y1, depth + 1)};
}

FourierApproximation reflect(const FourierApproximation& u, Quadrant q) {
  Eigen::MatrixXd c = u.coeffs();
  for (int i = 1; i <= u.max_mode(); ++i)
    for (int j = 1; j <= u.max_mode(); ++j) c(i - 1, j - 1) *= q.sign(i, j);
  return FourierApproximation(c);
}

PowerSeries1D sine_model(int mode, double origin, double scale, const Interval& domain, int degree) {
  auto lin = PowerSeries1D::affine(Interval(mode) * Interval(origin), Interval(mode) * Interval(scale), degree, domain);
  auto s = compose(ElemFn::sinpi(), lin);
  if (origin == 0) s[0] = Interval(0.0);
  return s;
}

PowerSeries2D enclose_on_rect(const FourierApproximation& eta, const Rect& r, int degree) {
  if (degree < 1) throw UsageError("enclose_on_rect: degree must be >= 1");
  const auto ax = eta.active_x(), ay = eta.active_y();
  std::vector<PowerSeries1D> X, Y;
  for (int i : ax) X.push_back(sine_model(i, r.origin_x(), r.scale_x(), r.domain_x(), degree));
  for (int j : ay) Y.push_back(sine_model(j, r.origin_y(), r.scale_y(), r.domain_y(), degree));
  IMatrix c = IMatrix::Constant(degree + 1, degree + 1, Interval(0.0));
  for (std::size_t b = 0; b < ay.size(); ++b) {
    IVector P = IVector::Constant(degree + 1, Interval(0.0));
    for (std::size_t a = 0; a < ax.size(); ++a) {
      double coef = eta(ax[a], ay[b]);
      if (coef != 0)
        for (int u = 0; u <= degree; ++u) P[u] += X[a][u] * coef;
    }
    for (int u = 0; u <= degree; ++u)
      for (int v = 0; v <= degree; ++v) c(u, v) += P[u] * Y[b][v];
  }
  return {c, r.domain_x(), r.domain_y()};
}

namespace {

// Pieces of d on which t^e has constant sign, with the integral of |t|^e
// and the sign on each.
struct Piece {
  Interval integral;
  int sign;
};

std::vector<Piece> monomial_pieces(RationalExp e, const Interval& d) {
  std::vector<Piece> out;
  const RationalExp e1 = e + RationalExp(1);
  if (!(e1 > RationalExp(0))) throw DomainError("integrate_monomial: exponent must exceed -1");
  const Interval inv = Interval(1.0) / Interval::from_rational(e1);
  auto prim = [&](double b) { return b == 0 ? Interval(0.0) : pow(Interval(b), e1); };
  if (d.hi() > 0) {
    double a = std::max(d.lo(), 0.0);
    out.push_back({(prim(d.hi()) - prim(a)) * inv, 1});
  }
  if (d.lo() < 0) {
    if (!e.is_integer()) throw DomainError("integrate_monomial: fractional power of a negative variable");
    double b = std::min(d.hi(), 0.0);
    int s = (e.num() % 2 == 0) ? 1 : -1;
    out.push_back({(prim(-d.lo()) - prim(-b)) * inv, s});
  }
  return out;
}

}  // namespace

Interval integrate_monomial_1d(const Interval& coeff, RationalExp e, const Interval& d) {
  Interval s(0.0);
  for (const auto& p : monomial_pieces(e, d)) s += coeff * (p.sign * p.integral);
  return s;
}

Interval integrate_monomial(const Interval& coeff, RationalExp ex, RationalExp ey, const Interval& dx,
                            const Interval& dy) {
  Interval s(0.0);
  const auto px = monomial_pieces(ex, dx), py = monomial_pieces(ey, dy);
  for (const auto& a : px)
    for (const auto& b : py) s += coeff * ((a.sign * b.sign) * (a.integral * b.integral));
  return s;
}

namespace {

// Divide out t (rows) and/or s (columns); the removed row/column must be exactly zero.
PowerSeries2D reduce_class(const PowerSeries2D& m, bool ax, bool ay) {
  const int n = m.degree();
  IMatrix c = m.coeffs();
  const Interval zero(0.0);
  if (ax) {
    for (int v = 0; v <= n; ++v)
      if (c(0, v) != zero) throw DomainError("integrate_rect: model does not vanish on the anchored x edge");
    IMatrix s = IMatrix::Constant(n + 1, n + 1, zero);
    s.topRows(n) = c.bottomRows(n);
    c = s;
  }
  if (ay) {
    for (int u = 0; u <= n; ++u)
      if (c(u, 0) != zero) throw DomainError("integrate_rect: model does not vanish on the anchored y edge");
    IMatrix s = IMatrix::Constant(n + 1, n + 1, zero);
    s.leftCols(n) = c.rightCols(n);
    c = s;
  }
  return {c, m.dx(), m.dy()};
}

PowerSeries2D power_model(const CompositionBasis& basis, RationalExp q, int n, const Interval& dx,
                          const Interval& dy) {
  if (q == RationalExp(0)) return PowerSeries2D::constant(Interval(1.0), n, dx, dy);
  return compose(ElemFn::pow(q), basis);
}

}  // namespace

Interval integrate_rect(const PowerSeries2D& eta_model, const PowerSeries2D& xi_model, RationalExp q, const Rect& r) {
  if (eta_model.dx() != r.domain_x() || eta_model.dy() != r.domain_y())
    throw UsageError("integrate_rect: model is not in the local frame of the rectangle");
  if (eta_model.degree() < 1) throw UsageError("integrate_rect: degree must be >= 1");
  const bool ax = r.anchored_x(), ay = r.anchored_y();
  PowerSeries2D red = reduce_class(eta_model, ax, ay);
  Interval R = range(red);
  if (!(R.lo() > 0)) throw PositivityError("integrate_rect: reduced model is not positive", R);
  PowerSeries2D W = power_model(composition_basis(red), q, red.degree(), red.dx(), red.dy());
  IMatrix full = mul_full(W, xi_model);
  const RationalExp ox = ax ? q : RationalExp(0), oy = ay ? q : RationalExp(0);
  Interval s(0.0);
  for (int v = 0; v < full.cols(); ++v)
    for (int u = 0; u < full.rows(); ++u)
      if (full(u, v) != Interval(0.0))
        s += integrate_monomial(full(u, v), ox + RationalExp(u), oy + RationalExp(v), r.domain_x(), r.domain_y());
  return s * (Interval(r.scale_x()) * Interval(r.scale_y()));
}

// ---- PowerIntegrator ---------------------------------------------------

namespace {

// sin(m1 pi x) sin(m2 pi x); a zero mode stands for the constant 1.
struct Factor {
  int m1 = 0, m2 = 0;
};

struct Cell {
  Rect r;
  CompositionBasis basis;  // of the reduced model
  Interval ered;           // range of the reduced model
};

struct Group {
  FourierApproximation eta;
  std::vector<int> quadrants;
  std::vector<Cell> cells;
  std::vector<Rect> rects;
};

// Degree at which the Taylor remainder of sin over |pi m scale t| <= b is negligible.
int factor_degree(int mode, double scale, int n) {
  const double b = std::numbers::pi * mode * scale;
  double term = 1;
  int k = 1;
  for (; k < 150; ++k) {
    term *= b / k;
    if (k > n + 1 && term < 1e-18) break;
  }
  return std::max(k - 1, n + 1);
}

PowerSeries1D reduced_sine(int mode, bool anchored, double origin, double scale, const Interval& dom, int n) {
  if (!anchored) return sine_model(mode, origin, scale, dom, n);
  auto s = sine_model(mode, 0.0, scale, dom, n + 1);
  IVector c = s.coeffs().tail(n + 1);
  return {c, dom};
}

PowerSeries2D reduced_model(const FourierApproximation& eta, const std::vector<int>& ax, const std::vector<int>& ay,
                            const Rect& r, int n) {
  std::vector<PowerSeries1D> X, Y;
  for (int i : ax) X.push_back(reduced_sine(i, r.anchored_x(), r.origin_x(), r.scale_x(), r.domain_x(), n));
  for (int j : ay) Y.push_back(reduced_sine(j, r.anchored_y(), r.origin_y(), r.scale_y(), r.domain_y(), n));
  IMatrix c = IMatrix::Constant(n + 1, n + 1, Interval(0.0));
  IVector P(n + 1);
  for (std::size_t b = 0; b < ay.size(); ++b) {
    P.setConstant(Interval(0.0));
    for (std::size_t a = 0; a < ax.size(); ++a) {
      double coef = eta(ax[a], ay[b]);
      if (coef != 0)
        for (int u = 0; u <= n; ++u) P[u] += X[a][u] * coef;
    }
    for (int v = 0; v <= n; ++v)
      for (int u = 0; u <= n; ++u) c(u, v) += P[u] * Y[b][v];
  }
  return {c, r.domain_x(), r.domain_y()};
}

// Point value of eta at the centre of r, from the reduced model.
Interval center_value(const PowerSeries2D& red, const Rect& r) {
  Interval tx = r.anchored_x() ? Interval(0.5) : Interval(0.0);
  Interval ty = r.anchored_y() ? Interval(0.5) : Interval(0.0);
  Interval v = eval(red, tx, ty);
  if (r.anchored_x()) v *= 0.5;
  if (r.anchored_y()) v *= 0.5;
  return v;
}

Interval eta_range(const Interval& ered, const Rect& r) {
  if (r.anchored_x() || r.anchored_y()) return Interval(0.0, 1.0) * ered;
  return ered;
}

// 1/(e + alpha + 1) for e = 0..size-1.
std::vector<Interval> inverse_table(RationalExp alpha, int size) {
  std::vector<Interval> t(size);
  for (int e = 0; e < size; ++e) t[e] = Interval(1.0) / Interval::from_rational(alpha + RationalExp(e + 1));
  return t;
}

struct MomentTables {
  std::vector<Interval> anchored, centered;
};

PowerSeries1D factor_model(const Factor& f, bool anchored, double origin, double scale, const Interval& dom, int n) {
  if (f.m1 == 0 && f.m2 == 0) return {IVector::Constant(1, Interval(1.0)), dom};
  auto one = [&](int m) { return sine_model(m, origin, scale, dom, factor_degree(m, scale, n)); };
  (void)anchored;
  if (f.m2 == 0) return one(f.m1);
  if (f.m1 == 0) return one(f.m2);
  return mul_full(one(f.m1), one(f.m2));
}

// J[u] encloses the integral of t^{u+alpha} X(t) over the frame domain.
IVector moments(const PowerSeries1D& X, bool anchored, const MomentTables& tab, int n) {
  IVector J(n + 1);
  const int N = X.degree();
  for (int u = 0; u <= n; ++u) {
    Interval acc(0.0);
    for (int k = 0; k <= N; ++k) {
      const int e = u + k;
      if (anchored) {
        acc += X[k] * tab.anchored[e];
      } else {
        acc += (e % 2 == 0 ? X[k] + X[k] : X[k] - X[k]) * tab.centered[e];
      }
    }
    J[u] = acc;
  }
  return J;
}

struct BlockSum {
  IMatrix S;          // S(a, b): integral of (midpoint power model) X_a Y_b
  Interval err{0.0};  // bound on the rest, per unit sup of |X_a Y_b|
};

}  // namespace

struct PowerIntegrator::Impl {
  FourierApproximation eta;
  QuadConfig cfg;
  std::vector<Group> groups;
  std::array<int, 4> group_of{};
  std::vector<int> ax, ay;

  Impl(const FourierApproximation& u, const QuadConfig& c) : eta(u), cfg(c) {}

  int workers() const { return cfg.workers > 0 ? cfg.workers : default_workers(); }

  void refine(const FourierApproximation& e, const Rect& r, std::vector<Cell>& out, int& budget) const {
    const int n = cfg.degree;
    PowerSeries2D red = reduced_model(e, ax, ay, r, n);
    Interval R = range(red);
    if (!(R.hi() > 0)) throw PositivityError("eta is not positive on a cell", R);
    auto split = [&](bool along_x) {
      auto [a, b] = r.split(along_x);
      refine(e, a, out, budget);
      refine(e, b, out, budget);
    };
    const bool x_longer = r.scale_x() >= r.scale_y();
    if (!(R.lo() > 0)) {
      if (r.depth >= cfg.max_depth) throw PositivityError("reduced model not positive at depth limit", R);
      --budget;
      split(x_longer);
      return;
    }
    if (r.depth < cfg.max_depth && budget > 0) {
      double vx = 0, vy = 0, w = 0;
      for (int v = 0; v <= n; ++v)
        for (int u = 0; u <= n; ++u) {
          const Interval& c = red(u, v);
          if (u > 0) vx += c.mag();
          if (v > 0 && u == 0) vy += c.mag();
          w += c.rad();
        }
      const double rho = (vx + vy + red(0, 0).rad()) / R.lo();
      const double rel = w / R.lo();
      if (std::pow(rho, n + 1) > cfg.rel_tol || rel > cfg.rel_tol) {
        --budget;
        split(rel > cfg.rel_tol ? x_longer : vx >= vy);
        return;
      }
    }
    out.push_back({r, composition_basis(red), R});
  }

  void build() {
    if (cfg.grid < 1 || cfg.grid > 4096 || (cfg.grid & (cfg.grid - 1)) != 0)
      throw UsageError("quadrature grid must be a power of two");
    if (cfg.degree < 1 || cfg.degree > 40) throw UsageError("quadrature degree must be in [1, 40]");
    if (cfg.max_depth < 0) throw UsageError("quadrature depth limit must be >= 0");
    if (!(cfg.rel_tol > 0)) throw UsageError("quadrature tolerance must be positive");
    ax = eta.active_x();
    ay = eta.active_y();
    if (ax.empty()) throw PositivityError("eta is identically zero", Interval(0.0));
    const auto quads = Quadrant::all();
    for (int q = 0; q < 4; ++q) {
      FourierApproximation r = reflect(eta, quads[q]);
      int found = -1;
      for (std::size_t g = 0; g < groups.size(); ++g)
        if (groups[g].eta.coeffs() == r.coeffs()) found = static_cast<int>(g);
      if (found < 0) {
        groups.push_back({r, {}, {}, {}});
        found = static_cast<int>(groups.size()) - 1;
      }
      groups[found].quadrants.push_back(q);
      group_of[q] = found;
    }
    const int M = cfg.grid;
    const double h = 0.5 / M;
    for (auto& g : groups) {
      std::vector<std::vector<Cell>> parts(M * M);
      parallel_for(M * M, workers(), [&](int k) {
        int bx = k % M, by = k / M;
        Rect base(bx * h, (bx + 1) * h, by * h, (by + 1) * h, 0);
        int budget = 256;
        refine(g.eta, base, parts[k], budget);
      });
      for (auto& p : parts)
        for (auto& c : p) {
          g.rects.push_back(c.r);
          g.cells.push_back(std::move(c));
        }
    }
  }

  BlockSum block_sum(const Group& g, const std::vector<Factor>& fx, const std::vector<Factor>& fy,
                     RationalExp q) const {
    const int n = cfg.degree;
    int maxN = 0;
    for (const auto& c : g.cells) {
      int mx = 0, my = 0;
      for (auto f : fx) mx = std::max(mx, factor_degree(f.m1, c.r.scale_x(), n) + factor_degree(f.m2, c.r.scale_x(), n));
      for (auto f : fy) my = std::max(my, factor_degree(f.m1, c.r.scale_y(), n) + factor_degree(f.m2, c.r.scale_y(), n));
      maxN = std::max({maxN, mx, my});
    }
    const int size = maxN + n + 2;
    MomentTables tq{inverse_table(q, size), inverse_table(RationalExp(0), size)};
    MomentTables t0{tq.centered, tq.centered};

    const int nc = static_cast<int>(g.cells.size());
    std::vector<BlockSum> parts(nc);
    parallel_for(nc, workers(), [&](int k) {
      const Cell& c = g.cells[k];
      const Rect& r = c.r;
      const bool axa = r.anchored_x(), aya = r.anchored_y();
      PowerSeries2D W = power_model(c.basis, q, n, r.domain_x(), r.domain_y());
      const MomentTables& tx = axa ? tq : t0;
      const MomentTables& ty = aya ? tq : t0;
      Eigen::MatrixXd M(n + 1, n + 1);
      Interval err(0.0);
      for (int v = 0; v <= n; ++v)
        for (int u = 0; u <= n; ++u) {
          M(u, v) = W(u, v).mid();
          double rad = (W(u, v) - M(u, v)).mag();
          Interval ix = axa ? tx.anchored[u] : tx.centered[u] * 2;
          Interval iy = aya ? ty.anchored[v] : ty.centered[v] * 2;
          err += Interval(rad) * ix * iy;
        }
      const int na = static_cast<int>(fx.size()), nb = static_cast<int>(fy.size());
      IMatrix Q(na, n + 1), Jy(nb, n + 1);
      for (int a = 0; a < na; ++a) {
        IVector J = moments(factor_model(fx[a], axa, r.origin_x(), r.scale_x(), r.domain_x(), n), axa, tx, n);
        for (int v = 0; v <= n; ++v) {
          Interval s(0.0);
          for (int u = 0; u <= n; ++u) s += J[u] * M(u, v);
          Q(a, v) = s;
        }
      }
      for (int b = 0; b < nb; ++b)
        Jy.row(b) = moments(factor_model(fy[b], aya, r.origin_y(), r.scale_y(), r.domain_y(), n), aya, ty, n).transpose();
      const Interval jac = Interval(r.scale_x()) * Interval(r.scale_y());
      BlockSum& out = parts[k];
      out.S.resize(na, nb);
      for (int b = 0; b < nb; ++b)
        for (int a = 0; a < na; ++a) {
          Interval s(0.0);
          for (int v = 0; v <= n; ++v) s += Q(a, v) * Jy(b, v);
          out.S(a, b) = s * jac;
        }
      out.err = err * jac;
    });
    BlockSum total;
    total.S = IMatrix::Constant(fx.size(), fy.size(), Interval(0.0));
    for (const auto& p : parts) {
      total.S += p.S;
      total.err += p.err;
    }
    return total;
  }

  // Integral of eta^q xi over the quadrants in `which`, xi given by interval coefficients.
  Interval integrate(const IMatrix& xi, RationalExp q, const std::vector<int>& which) const {
    std::vector<int> mx, my;
    for (int i = 0; i < xi.rows(); ++i)
      for (int j = 0; j < xi.cols(); ++j)
        if (xi(i, j) != Interval(0.0)) {
          mx.push_back(i + 1);
          my.push_back(j + 1);
        }
    std::sort(mx.begin(), mx.end());
    mx.erase(std::unique(mx.begin(), mx.end()), mx.end());
    std::sort(my.begin(), my.end());
    my.erase(std::unique(my.begin(), my.end()), my.end());
    if (mx.empty()) return Interval(0.0);
    std::vector<Factor> fx, fy;
    for (int m : mx) fx.push_back({m, 0});
    for (int m : my) fy.push_back({m, 0});
    double cabs = 0;
    {
      Interval s(0.0);
      for (std::size_t a = 0; a < mx.size(); ++a)
        for (std::size_t b = 0; b < my.size(); ++b) s += Interval(xi(mx[a] - 1, my[b] - 1).mag());
      cabs = s.hi();
    }
    const auto quads = Quadrant::all();
    Interval total(0.0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<int> qs;
      for (int q4 : which)
        if (group_of[q4] == static_cast<int>(g)) qs.push_back(q4);
      if (qs.empty()) continue;
      BlockSum bs = block_sum(groups[g], fx, fy, q);
      for (int q4 : qs) {
        Interval s(0.0);
        for (std::size_t b = 0; b < my.size(); ++b)
          for (std::size_t a = 0; a < mx.size(); ++a) {
            const Interval& c = xi(mx[a] - 1, my[b] - 1);
            if (c == Interval(0.0)) continue;
            s += (quads[q4].sign(mx[a], my[b]) * c) * bs.S(a, b);
          }
        total += s + Interval(-1.0, 1.0) * (bs.err * cabs);
      }
    }
    return total;
  }
};

PowerIntegrator::PowerIntegrator(const FourierApproximation& eta, const QuadConfig& cfg)
    : impl_(std::make_unique<Impl>(eta, cfg)) {
  impl_->build();
}

PowerIntegrator::~PowerIntegrator() = default;
PowerIntegrator::PowerIntegrator(PowerIntegrator&&) noexcept = default;

Interval PowerIntegrator::integral_power(const IMatrix& xi, RationalExp q) const {
  return impl_->integrate(xi, q, {0, 1, 2, 3});
}

Interval PowerIntegrator::integral_power(const FourierApproximation& xi, RationalExp q) const {
  return integral_power(to_interval(xi.coeffs()), q);
}

Interval PowerIntegrator::integral_power_unit(RationalExp q) const {
  const auto& im = *impl_;
  Interval total(0.0);
  for (const auto& g : im.groups) {
    BlockSum bs = im.block_sum(g, {Factor{}}, {Factor{}}, q);
    total += (bs.S(0, 0) + Interval(-1.0, 1.0) * bs.err) * static_cast<int>(g.quadrants.size());
  }
  return total;
}

std::array<Interval, 4> PowerIntegrator::quadrant_integrals(const FourierApproximation& xi, RationalExp q) const {
  std::array<Interval, 4> r;
  IMatrix c = to_interval(xi.coeffs());
  for (int k = 0; k < 4; ++k) r[k] = impl_->integrate(c, q, {k});
  return r;
}

IMatrix PowerIntegrator::weighted_gram(const std::vector<std::pair<int, int>>& basis, RationalExp q,
                                       const Interval& factor) const {
  const auto& im = *impl_;
  // Products of basis modes per axis, unordered.
  std::vector<int> xs, ys;
  for (auto [i, j] : basis) {
    if (i < 1 || j < 1) throw UsageError("weighted_gram: modes must be >= 1");
    xs.push_back(i);
    ys.push_back(j);
  }
  auto uniq = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(xs);
  uniq(ys);
  auto pairs = [](const std::vector<int>& m, std::vector<Factor>& f) {
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a; b < m.size(); ++b) f.push_back({m[a], m[b]});
  };
  std::vector<Factor> fx, fy;
  pairs(xs, fx);
  pairs(ys, fy);
  auto index = [](const std::vector<int>& m, int i, int k) {
    int a = static_cast<int>(std::lower_bound(m.begin(), m.end(), std::min(i, k)) - m.begin());
    int b = static_cast<int>(std::lower_bound(m.begin(), m.end(), std::max(i, k)) - m.begin());
    int nm = static_cast<int>(m.size());
    return a * nm - a * (a - 1) / 2 + (b - a);
  };
  const int nb = static_cast<int>(basis.size());
  IMatrix G = IMatrix::Constant(nb, nb, Interval(0.0));
  const auto quads = Quadrant::all();
  for (const auto& g : im.groups) {
    BlockSum bs = im.block_sum(g, fx, fy, q);
    for (int a = 0; a < nb; ++a)
      for (int b = a; b < nb; ++b) {
        auto [i, j] = basis[a];
        auto [k, l] = basis[b];
        int sgn = 0;
        for (int q4 : g.quadrants) sgn += quads[q4].sign(i, j) * quads[q4].sign(k, l);
        const int cnt = static_cast<int>(g.quadrants.size());
        Interval e = bs.S(index(xs, i, k), index(ys, j, l)) * sgn + Interval(-1.0, 1.0) * bs.err * cnt;
        G(a, b) += e;
      }
  }
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) {
      G(a, b) = factor * G(a, b);
      G(b, a) = G(a, b);
    }
  return G;
}

Interval PowerIntegrator::max_enclosure(int rounds) const {
  const auto& im = *impl_;
  const int n = im.cfg.degree;
  struct Cand {
    Rect r;
    Interval range;
    const Group* g;
  };
  std::vector<Cand> cands;
  double lower = 0;
  for (const auto& g : im.groups)
    for (const auto& c : g.cells) {
      cands.push_back({c.r, eta_range(c.ered, c.r), &g});
      PowerSeries2D red = reduced_model(g.eta, im.ax, im.ay, c.r, n);
      lower = std::max(lower, center_value(red, c.r).lo());
    }
  for (int round = 0; round <= rounds; ++round) {
    std::vector<Cand> keep;
    for (const auto& c : cands)
      if (c.range.hi() >= lower) keep.push_back(c);
    if (round == rounds || keep.size() > 4096) {
      cands = std::move(keep);
      break;
    }
    std::vector<Cand> next;
    for (const auto& c : keep) {
      auto [a, b] = c.r.split(true);
      for (const Rect& h : {a, b}) {
        auto [p, s] = h.split(false);
        for (const Rect& r : {p, s}) {
          PowerSeries2D red = reduced_model(c.g->eta, im.ax, im.ay, r, n);
          next.push_back({r, eta_range(range(red), r), c.g});
          lower = std::max(lower, center_value(red, r).lo());
        }
      }
    }
    cands = std::move(next);
  }
  double upper = lower;
  for (const auto& c : cands) upper = std::max(upper, c.range.hi());
  return {lower, upper};
}

Interval PowerIntegrator::min_enclosure() const { return Interval(0.0); }

std::pair<Interval, Rect> PowerIntegrator::positivity_witness() const {
  const auto& g = impl_->groups.front();
  Interval best(0.0);
  Rect where = g.cells.front().r;
  for (const auto& c : g.cells)
    if (c.r.cls() == RectClass::S00 && c.ered.lo() > best.lo()) {
      best = c.ered;
      where = c.r;
    }
  return {best, where};
}

std::size_t PowerIntegrator::cell_count() const {
  std::size_t n = 0;
  for (const auto& g : impl_->groups) n += g.cells.size();
  return n;
}

const std::vector<Rect>& PowerIntegrator::cells(int quadrant) const {
  if (quadrant < 0 || quadrant > 3) throw UsageError("quadrant index out of range");
  return impl_->groups[impl_->group_of[quadrant]].rects;
}

const FourierApproximation& PowerIntegrator::eta() const { return impl_->eta; }
const QuadConfig& PowerIntegrator::config() const { return impl_->cfg; }

Interval integral_power(const FourierApproximation& eta, const FourierApproximation& xi, RationalExp q,
                        const QuadConfig& cfg) {
  return PowerIntegrator(eta, cfg).integral_power(xi, q);
}

// ---- residual ----------------------------------------------------------

Interval cube_integral(const FourierApproximation& u) {
  std::vector<int> modes;
  for (int i = 1; i <= u.max_mode(); ++i)
    if ((u.coeffs().row(i - 1).array() != 0).any() || (u.coeffs().col(i - 1).array() != 0).any()) modes.push_back(i);
  const int m = static_cast<int>(modes.size());
  // int_0^1 sin(i pi x) sin(j pi x) sin(k pi x) dx = R_ijk / (2 pi), R a sum of +-1/odd.
  auto inv_odd = [](int s) { return (s % 2 != 0) ? RationalExp(1, s) : RationalExp(0); };
  std::vector<Interval> R(static_cast<std::size_t>(m) * m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        int i = modes[a], j = modes[b], k = modes[c];
        RationalExp r = inv_odd(i + j - k) + inv_odd(i - j + k) + inv_odd(-i + j + k) - inv_odd(i + j + k);
        R[(a * m + b) * m + c] = Interval::from_rational(r);
      }
  Eigen::MatrixXd A(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) A(a, b) = u(modes[a], modes[b]);
  // B_lmn = sum_ijk R_ijk A_il A_jm A_kn, contracted one index at a time.
  auto contract = [&](const std::vector<Interval>& T) {
    // T indexed (i, j, k); returns (j, k, l) = sum_i T_ijk A_il
    std::vector<Interval> out(T.size(), Interval(0.0));
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          Interval s(0.0);
          for (int i = 0; i < m; ++i)
            if (A(i, l) != 0) s += T[(i * m + j) * m + k] * A(i, l);
          out[(j * m + k) * m + l] = s;
        }
    return out;
  };
  std::vector<Interval> B = contract(contract(contract(R)));
  Interval s(0.0);
  for (std::size_t k = 0; k < R.size(); ++k) s += R[k] * B[k];
  return s / sqr(2 * pi());
}

Interval residual_l2(const PowerIntegrator& in, RationalExp p) {
  const FourierApproximation& u = in.eta();
  const int n = u.max_mode();
  const Interval pi2 = sqr(pi());
  Interval lap(0.0);
  IMatrix C = IMatrix::Constant(n, n, Interval(0.0));
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      if (u(i, j) == 0) continue;
      Interval w = Interval(i * i + j * j) * u(i, j);
      C(i - 1, j - 1) = w;
      lap += sqr(w);
    }
  // ||Delta u||^2 = pi^4/4 sum ((i^2+j^2) a_ij)^2
  Interval t1 = sqr(pi2) * lap / 4;
  Interval t2 = -2 * pi2 * in.integral_power(C, p);
  const RationalExp q2 = p * RationalExp(2);
  Interval t3 = q2 == RationalExp(3) ? cube_integral(u) : in.integral_power_unit(q2);
  Interval s = t1 + t2 + t3;
  if (s.hi() < 0) throw DomainError("residual_l2: negative squared norm enclosure");
  return sqrt(Interval(std::max(0.0, s.lo()), s.hi()));
}

Interval residual_l2(const FourierApproximation& u, RationalExp p, const QuadConfig& cfg) {
  return residual_l2(PowerIntegrator(u, cfg), p);
}

IMatrix weighted_gram(const PowerIntegrator& in, RationalExp p, const std::vector<std::pair<int, int>>& basis) {
  return in.weighted_gram(basis, p - RationalExp(1), Interval::from_rational(p));
}

Interval sup_weight(const PowerIntegrator& in, RationalExp p) {
  return Interval::from_rational(p) * pow(in.max_enclosure(), p - RationalExp(1));
}

}  // namespace semilin
