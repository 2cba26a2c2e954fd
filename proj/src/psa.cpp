#include "semilin/psa.hpp"

#include <algorithm>

namespace semilin {

double norm2_upper(const IMatrix& m) {
  Interval n1(0.0), ninf(0.0);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Interval s(0.0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) s += Interval(m(i, j).mag());
    n1 = max(n1, s);
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Interval s(0.0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += Interval(m(i, j).mag());
    ninf = max(ninf, s);
  }
  return sqrt(Interval(n1.hi()) * Interval(ninf.hi())).hi();
}

// ---- outer functions ----------------------------------------------------

void ElemFn::check_domain(const Interval& t) const {
  switch (kind_) {
    case Kind::Pow:
      if (!q_.is_integer() && !(t.lo() > 0))
        throw PositivityError("pow: inner range not strictly positive", t);
      if (q_.is_integer() && q_.num() < 0 && t.contains(0.0))
        throw PositivityError("pow: inner range contains 0", t);
      break;
    case Kind::Log:
      if (!(t.lo() > 0)) throw PositivityError("log: inner range not strictly positive", t);
      break;
    case Kind::Recip:
      if (t.contains(0.0)) throw PositivityError("recip: inner range contains 0", t);
      break;
    default:
      break;
  }
}

std::vector<Interval> ElemFn::taylor(const Interval& t, int order) const {
  std::vector<Interval> c(order + 1);
  switch (kind_) {
    case Kind::Pow: {
      Interval q = Interval::from_rational(q_);
      Interval b(1.0);
      for (int i = 0; i <= order; ++i) {
        if (i > 0) b = b * (q - Interval(i - 1)) / Interval(i);
        if (b == Interval(0.0)) {
          c[i] = Interval(0.0);
        } else {
          c[i] = b * semilin::pow(t, q_ - RationalExp(i));
        }
      }
      break;
    }
    case Kind::Log: {
      c[0] = semilin::log(t);
      Interval ti = t;
      for (int i = 1; i <= order; ++i) {
        Interval v = Interval(1.0) / (Interval(i) * ti);
        c[i] = (i % 2) ? v : -v;
        ti *= t;
      }
      break;
    }
    case Kind::Exp: {
      Interval e = semilin::exp(t), f(1.0);
      for (int i = 0; i <= order; ++i) {
        if (i > 0) f /= Interval(i);
        c[i] = e * f;
      }
      break;
    }
    case Kind::Sin:
    case Kind::SinPi: {
      bool scaled = kind_ == Kind::SinPi;
      Interval s = scaled ? semilin::sinpi(t) : semilin::sin(t);
      Interval co = scaled ? semilin::cospi(t) : semilin::cos(t);
      const Interval cyc[4] = {s, co, -s, -co};
      Interval f(1.0);
      for (int i = 0; i <= order; ++i) {
        if (i > 0) f = f * (scaled ? pi() : Interval(1.0)) / Interval(i);
        c[i] = cyc[i % 4] * f;
      }
      break;
    }
    case Kind::Recip: {
      Interval inv = Interval(1.0) / t, p = inv;
      for (int i = 0; i <= order; ++i) {
        c[i] = (i % 2) ? -p : p;
        p *= inv;
      }
      break;
    }
  }
  return c;
}

Interval ElemFn::taylor_coeff(const Interval& t, int i) const { return taylor(t, i)[i]; }

// ---- 1D ----------------------------------------------------------------

Interval horner(const IVector& c, const Interval& d) {
  Interval acc = c[c.size() - 1];
  for (Eigen::Index k = c.size() - 2; k >= 0; --k) acc = acc * d + c[k];
  return acc;
}

PowerSeries1D::PowerSeries1D(IVector coeffs, Interval domain) : c_(std::move(coeffs)), dom_(domain) {
  if (c_.size() == 0) throw UsageError("PowerSeries1D: empty coefficient vector");
}

PowerSeries1D PowerSeries1D::constant(const Interval& c, int degree, const Interval& domain) {
  IVector v = IVector::Constant(degree + 1, Interval(0.0));
  v[0] = c;
  return {v, domain};
}

PowerSeries1D PowerSeries1D::variable(int degree, const Interval& domain) {
  if (degree < 1) throw UsageError("PowerSeries1D::variable needs degree >= 1");
  IVector v = IVector::Constant(degree + 1, Interval(0.0));
  v[1] = Interval(1.0);
  return {v, domain};
}

PowerSeries1D PowerSeries1D::affine(const Interval& a, const Interval& b, int degree, const Interval& domain) {
  if (degree < 1) throw UsageError("PowerSeries1D::affine needs degree >= 1");
  IVector v = IVector::Constant(degree + 1, Interval(0.0));
  v[0] = a;
  v[1] = b;
  return {v, domain};
}

namespace {

void check_compatible(const PowerSeries1D& a, const PowerSeries1D& b) {
  if (a.degree() != b.degree() || a.domain() != b.domain())
    throw UsageError("power series: degree or domain mismatch");
}

void check_compatible(const PowerSeries2D& a, const PowerSeries2D& b) {
  if (a.degree() != b.degree() || a.dx() != b.dx() || a.dy() != b.dy())
    throw UsageError("power series: degree or domain mismatch");
}

}  // namespace

PowerSeries1D operator+(const PowerSeries1D& a, const PowerSeries1D& b) {
  check_compatible(a, b);
  return {a.coeffs() + b.coeffs(), a.domain()};
}

PowerSeries1D operator-(const PowerSeries1D& a, const PowerSeries1D& b) {
  check_compatible(a, b);
  return {a.coeffs() - b.coeffs(), a.domain()};
}

PowerSeries1D operator*(const Interval& s, const PowerSeries1D& a) {
  IVector c = a.coeffs();
  for (auto& x : c) x = s * x;
  return {c, a.domain()};
}

PowerSeries1D operator+(const PowerSeries1D& a, const Interval& s) {
  PowerSeries1D r = a;
  r[0] += s;
  return r;
}

PowerSeries1D mul_full(const PowerSeries1D& a, const PowerSeries1D& b) {
  if (a.domain() != b.domain()) throw UsageError("power series: domain mismatch");
  int da = a.degree(), db = b.degree();
  IVector c = IVector::Constant(da + db + 1, Interval(0.0));
  for (int i = 0; i <= da; ++i) {
    if (a[i] == Interval(0.0)) continue;
    for (int j = 0; j <= db; ++j) c[i + j] += a[i] * b[j];
  }
  return {c, a.domain()};
}

PowerSeries1D reduce_degree(const PowerSeries1D& u, int n) {
  if (n < 0) throw UsageError("reduce_degree: negative degree");
  if (u.degree() <= n) {
    IVector c = IVector::Constant(n + 1, Interval(0.0));
    c.head(u.degree() + 1) = u.coeffs();
    return {c, u.domain()};
  }
  IVector c = u.coeffs().head(n + 1);
  c[n] = horner(u.coeffs().tail(u.degree() - n + 1), u.domain());
  return {c, u.domain()};
}

PowerSeries1D operator*(const PowerSeries1D& a, const PowerSeries1D& b) {
  check_compatible(a, b);
  return reduce_degree(mul_full(a, b), a.degree());
}

Interval range(const PowerSeries1D& u) { return horner(u.coeffs(), u.domain()); }

Interval eval(const PowerSeries1D& u, const Interval& x) { return horner(u.coeffs(), x); }

PowerSeries1D compose(const ElemFn& f, const PowerSeries1D& u) {
  const int n = u.degree();
  const Interval R = range(u);
  const double u0 = u[0].mid();
  const Interval H = hull(Interval(u0), R);
  f.check_domain(H);
  if (n == 0) return PowerSeries1D::constant(f.taylor_coeff(H, 0), 0, u.domain());

  PowerSeries1D v = u;
  v[0] = u[0] - u0;
  std::vector<Interval> T = f.taylor(Interval(u0), n - 1);
  Interval Rn = f.taylor_coeff(H, n);

  bool affine = v[0] == Interval(0.0);
  for (int k = 2; affine && k <= n; ++k) affine = v[k] == Interval(0.0);
  if (affine) {
    // v = b x: powers are monomials, no truncation needed.
    IVector c(n + 1);
    Interval bk(1.0);
    c[0] = T[0];
    for (int i = 1; i <= n; ++i) {
      bk *= v[1];
      c[i] = (i < n ? T[i] : Rn) * bk;
    }
    return {c, u.domain()};
  }

  PowerSeries1D result = PowerSeries1D::constant(T[0], n, u.domain());
  PowerSeries1D pw = v;
  for (int i = 1; i < n; ++i) {
    result = result + T[i] * pw;
    pw = pw * v;
  }
  return result + Rn * pw;
}

// ---- 2D ----------------------------------------------------------------

PowerSeries2D::PowerSeries2D(IMatrix coeffs, Interval dx, Interval dy)
    : c_(std::move(coeffs)), dx_(dx), dy_(dy) {
  if (c_.rows() == 0 || c_.rows() != c_.cols()) throw UsageError("PowerSeries2D: coefficients must be square");
}

PowerSeries2D PowerSeries2D::constant(const Interval& c, int degree, const Interval& dx, const Interval& dy) {
  IMatrix m = IMatrix::Constant(degree + 1, degree + 1, Interval(0.0));
  m(0, 0) = c;
  return {m, dx, dy};
}

PowerSeries2D PowerSeries2D::tensor(const PowerSeries1D& a, const PowerSeries1D& b) {
  if (a.degree() != b.degree()) throw UsageError("tensor: degree mismatch");
  int n = a.degree();
  IMatrix m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m(i, j) = a[i] * b[j];
  return {m, a.domain(), b.domain()};
}

PowerSeries2D operator+(const PowerSeries2D& a, const PowerSeries2D& b) {
  check_compatible(a, b);
  return {a.coeffs() + b.coeffs(), a.dx(), a.dy()};
}

PowerSeries2D operator-(const PowerSeries2D& a, const PowerSeries2D& b) {
  check_compatible(a, b);
  return {a.coeffs() - b.coeffs(), a.dx(), a.dy()};
}

PowerSeries2D operator*(const Interval& s, const PowerSeries2D& a) {
  IMatrix c = a.coeffs();
  for (Eigen::Index k = 0; k < c.size(); ++k) c.data()[k] = s * c.data()[k];
  return {c, a.dx(), a.dy()};
}

PowerSeries2D operator+(const PowerSeries2D& a, const Interval& s) {
  PowerSeries2D r = a;
  r(0, 0) += s;
  return r;
}

namespace {

IMatrix mul_full_exact(const PowerSeries2D& a, const PowerSeries2D& b) {
  const int da = a.degree(), db = b.degree(), m = da + db + 1;
  IMatrix c = IMatrix::Constant(m, m, Interval(0.0));
  const Interval zero(0.0);
  // column-major storage: c(i, j) at data[i + j*m]
  for (int j = 0; j <= da; ++j) {
    for (int i = 0; i <= da; ++i) {
      const Interval aij = a(i, j);
      if (aij == zero) continue;
      for (int l = 0; l <= db; ++l) {
        Interval* col = c.data() + (j + l) * m + i;
        const Interval* bcol = b.coeffs().data() + l * (db + 1);
        for (int k = 0; k <= db; ++k) col[k] += aij * bcol[k];
      }
    }
  }
  return c;
}

// Midpoint-radius product. Each entry is a sum of at most K = (db+1)^2
// products; floating-point accumulation of the midpoints is off by at most
// gamma_K * sum |am bm| (plus K underflow quanta), which goes into the radius
// together with the propagated radii.
IMatrix mul_full_midrad(const PowerSeries2D& a, const PowerSeries2D& b) {
  using detail::add_up;
  using detail::mul_up;
  const int da = a.degree(), db = b.degree(), m = da + db + 1;
  const int na = (da + 1) * (da + 1), nb = (db + 1) * (db + 1);
  std::vector<double> am(na), ar(na), bm(nb), br(nb);
  for (int k = 0; k < na; ++k) {
    am[k] = a.coeffs().data()[k].mid();
    ar[k] = a.coeffs().data()[k].rad();
  }
  for (int k = 0; k < nb; ++k) {
    bm[k] = b.coeffs().data()[k].mid();
    br[k] = b.coeffs().data()[k].rad();
  }
  std::vector<double> cm(m * m, 0.0), cs(m * m, 0.0), ct(m * m, 0.0);
  std::vector<char> touched(m * m, 0);
  for (int j = 0; j <= da; ++j)
    for (int i = 0; i <= da; ++i) {
      const double x = am[i + j * (da + 1)], xr = ar[i + j * (da + 1)], xa = std::fabs(x);
      if (x == 0 && xr == 0) continue;
      for (int l = 0; l <= db; ++l) {
        const int o = i + (j + l) * m;
        const double* ym = bm.data() + l * (db + 1);
        const double* yr = br.data() + l * (db + 1);
        double* pm = cm.data() + o;
        double* ps = cs.data() + o;
        double* pt = ct.data() + o;
        for (int k = 0; k <= db; ++k) {
          const double ya = std::fabs(ym[k]);
          pm[k] += x * ym[k];
          ps[k] += xa * ya;
          pt[k] += xa * yr[k] + xr * (ya + yr[k]);
        }
        for (int k = 0; k <= db; ++k) touched[o + k] |= (ym[k] != 0 || yr[k] != 0);
      }
    }
  const double u = 0x1p-53;
  const int K = std::min(na, nb);
  const double n3 = 3.0 * K + 3;
  const double gamma = (K * u) / (1 - K * u);
  // computed nonnegative sums understate the exact ones by at most a factor 1 - gamma_{3K+3}
  const double inflate = 1 / (1 - (n3 * u) / (1 - n3 * u)) + 4 * u;
  const double eta = K * 0x1p-1070;
  IMatrix c = IMatrix::Constant(m, m, Interval(0.0));
  for (int k = 0; k < m * m; ++k) {
    if (!touched[k]) continue;
    double rad = add_up(mul_up(add_up(mul_up(gamma * (1 + 4 * u), cs[k]), ct[k]), inflate), eta);
    c.data()[k] = Interval(detail::sub_down(cm[k], rad), add_up(cm[k], rad));
  }
  return c;
}

}  // namespace

IMatrix mul_full(const PowerSeries2D& a, const PowerSeries2D& b) {
  if (a.dx() != b.dx() || a.dy() != b.dy()) throw UsageError("power series: domain mismatch");
  if (std::min(a.degree(), b.degree()) >= 3) return mul_full_midrad(a, b);
  return mul_full_exact(a, b);
}

PowerSeries2D reduce_degree(const IMatrix& full, int n, const Interval& dx, const Interval& dy) {
  const int mx = static_cast<int>(full.rows()) - 1, my = static_cast<int>(full.cols()) - 1;
  // y first, row by row
  IMatrix t = IMatrix::Constant(mx + 1, n + 1, Interval(0.0));
  const int ny = std::min(my, n);
  t.leftCols(ny + 1) = full.leftCols(ny + 1);
  if (my > n) {
    for (int a = 0; a <= mx; ++a) {
      Interval acc = full(a, my);
      for (int k = my - 1; k >= n; --k) acc = acc * dy + full(a, k);
      t(a, n) = acc;
    }
  }
  IMatrix r = IMatrix::Constant(n + 1, n + 1, Interval(0.0));
  const int nx = std::min(mx, n);
  r.topRows(nx + 1) = t.topRows(nx + 1);
  if (mx > n) {
    for (int j = 0; j <= n; ++j) {
      Interval acc = t(mx, j);
      for (int a = mx - 1; a >= n; --a) acc = acc * dx + t(a, j);
      r(n, j) = acc;
    }
  }
  return {r, dx, dy};
}

PowerSeries2D operator*(const PowerSeries2D& a, const PowerSeries2D& b) {
  check_compatible(a, b);
  return reduce_degree(mul_full(a, b), a.degree(), a.dx(), a.dy());
}

Interval eval(const PowerSeries2D& u, const Interval& x, const Interval& y) {
  const int n = u.degree();
  // rows in y, then x
  IVector rows(n + 1), cols(n + 1);
  for (int i = 0; i <= n; ++i) rows[i] = horner(u.coeffs().row(i).transpose(), y);
  for (int j = 0; j <= n; ++j) cols[j] = horner(u.coeffs().col(j), x);
  Interval a = horner(rows, x), b = horner(cols, y);
  double lo = std::fmax(a.lo(), b.lo()), hi = std::fmin(a.hi(), b.hi());
  return lo <= hi ? Interval(lo, hi) : a;
}

Interval range(const PowerSeries2D& u) { return eval(u, u.dx(), u.dy()); }

CompositionBasis composition_basis(const PowerSeries2D& u) {
  CompositionBasis b;
  const int n = u.degree();
  b.u0 = u(0, 0).mid();
  b.hull = hull(Interval(b.u0), range(u));
  if (n == 0) return b;
  PowerSeries2D v = u;
  v(0, 0) = u(0, 0) - b.u0;
  b.powers.reserve(n);
  b.powers.push_back(v);
  for (int i = 1; i < n; ++i) b.powers.push_back(b.powers.back() * v);
  return b;
}

PowerSeries2D compose(const ElemFn& f, const CompositionBasis& basis) {
  f.check_domain(basis.hull);
  const int n = static_cast<int>(basis.powers.size());
  if (n == 0) throw UsageError("compose: degree-0 basis carries no domain");
  const auto& v = basis.powers.front();
  std::vector<Interval> T = f.taylor(Interval(basis.u0), n - 1);
  Interval Rn = f.taylor_coeff(basis.hull, n);
  IMatrix c = IMatrix::Constant(n + 1, n + 1, Interval(0.0));
  c(0, 0) = T[0];
  for (int i = 1; i <= n; ++i) {
    const Interval s = i < n ? T[i] : Rn;
    const IMatrix& p = basis.powers[i - 1].coeffs();
    for (Eigen::Index k = 0; k < c.size(); ++k) c.data()[k] += s * p.data()[k];
  }
  return {c, v.dx(), v.dy()};
}

PowerSeries2D compose(const ElemFn& f, const PowerSeries2D& u) {
  if (u.degree() == 0) {
    Interval H = hull(Interval(u(0, 0).mid()), u(0, 0));
    f.check_domain(H);
    return PowerSeries2D::constant(f.taylor_coeff(H, 0), 0, u.dx(), u.dy());
  }
  return compose(f, composition_basis(u));
}

}  // namespace semilin
