// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "semilin/pipeline.hpp"
#include "semilin/psa.hpp"

using namespace semilin;
using oracle::mp;
namespace bmp = boost::multiprecision;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const char* cli() { return std::getenv("SEMILIN_CLI"); }

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = std::string(cli()) + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int st = pclose(f);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

double ulp(double x) { return detail::next_up(std::fabs(x)) - std::fabs(x); }

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

// 1
void constants(Outcome& o) {
  Interval c4 = embedding_constant(4), c2 = poincare_c2(), cn = projection_constant(14);
  o.require(c4.hi() >= 0.3183098 && c4.hi() <= 0.3183099 + 1e-7, "C4 upper bound window");
  o.require(c4.hi() <= 0.318309887, "C4 <= 0.318309887");
  o.require(oracle::inside(c2, 1 / (bmp::sqrt(mp(2)) * oracle::pi())), "C2 contains 1/(sqrt2 pi)");
  o.require(c2.width() <= 1e-12, "C2 width");
  o.require(oracle::inside(cn, 1 / (15 * oracle::pi())), "C_N(14) contains 1/(15 pi)");
  mp inv_pi = 1 / oracle::pi();
  o.require(bmp::abs(mp(c4.lo()) - inv_pi) <= mp(1e-9) && bmp::abs(mp(c4.hi()) - inv_pi) <= mp(1e-9),
            "C4 within 1e-9 of 1/pi");
  if (cli()) {
    auto [code, out] = run_cli("constants --p 4");
    double lo = 0, hi = 1;
    auto pos = out.find("C4");
    bool parsed = pos != std::string::npos && std::sscanf(out.c_str() + pos, "C4 [%lf, %lf]", &lo, &hi) == 2;
    o.require(code == 0 && parsed && hi <= 0.318309887, "constants subcommand");
  }
  o.detail << "C4 <= " << fmt("%.12g", c4.hi()) << ", C2 width " << fmt("%.2g", c2.width());
}

// 2
void psa_golden(Outcome& o) {
  const Interval d(0.0, Interval::from_string("0.1").hi());
  auto poly = [&](double a, double b, double c) {
    IVector v(3);
    v << Interval(a), Interval(b), Interval(c);
    return PowerSeries1D(v, d);
  };
  auto a = poly(1, 2, -3), b = poly(1, -1, 1);
  auto s = a + b, df = a - b, m = a * b;
  o.require(s[0] == Interval(2.0) && s[1] == Interval(1.0) && s[2] == Interval(-2.0), "sum");
  o.require(df[0] == Interval(0.0) && df[1] == Interval(3.0) && df[2] == Interval(-4.0), "difference");
  o.require(m[0] == Interval(1.0) && m[1] == Interval(1.0) && m[2].contains(Interval(-4.0, -3.5)) &&
                m[2].lo() >= -4 - 4 * ulp(4) && m[2].hi() <= -3.5 + 4 * ulp(3.5),
            "product");
  auto l = compose(ElemFn::log(), a);
  o.require(oracle::inside(l[2], mp(-5)) && oracle::inside(l[2], mp(-143) / 36), "log x^2 coefficient");
  if (cli()) o.require(run_cli("psa-selftest").first == 0, "psa-selftest subcommand");
  o.detail << "product x^2 " << to_string(m[2]) << ", log x^2 " << to_string(l[2]);
}

// 3
void interval_order(Outcome& o) {
  Interval c = hull(Interval::from_string("0.8"), Interval(1.0));
  Interval r = integrate_monomial_1d(c, RationalExp(1), Interval(-1.0, 1.0));
  o.require(r.contains(Interval(-0.1, 0.1)), "contains [-0.1,0.1]");
  o.require(r.width() <= 0.2 + 1e-12, "width");
  o.detail << "enclosure " << to_string(r);
}

// 4
void quadrature(Outcome& o) {
  QuadConfig cfg;  // M = 16, degree 6
  const int cases = 24;
  std::vector<double> rel;
  int contained = 0;
  for (int k = 0; k < cases; ++k) {
    auto eta = fixtures::random_positive(5, 0.9);
    auto xi = fixtures::random_series(3);
    auto e = fixtures::sine_sum(eta), x = fixtures::sine_sum(xi);
    double ref = oracle::integrate2d([&](double a, double b) { return std::sqrt(std::max(0.0, e(a, b))) * x(a, b); },
                                     0, 1, 0, 1, 1e-13);
    Interval v = integral_power(eta, xi, RationalExp(1, 2), cfg);
    // the oracle value is known to 1e-12 relative
    if (oracle::inside(v + Interval(-1e-12, 1e-12) * std::fabs(ref), ref)) ++contained;
    rel.push_back(v.width() / std::fabs(ref));
  }
  std::nth_element(rel.begin(), rel.begin() + cases / 2, rel.end());
  o.require(contained == cases, "containment");
  o.require(rel[cases / 2] <= 1e-3, "median relative width");
  o.detail << contained << "/" << cases << " contained, median relative width " << fmt("%.2g", rel[cases / 2]);
}

// 5
void eigen_oracle(Outcome& o) {
  int contained = 0, total = 0;
  for (int t = 0; t < 100; ++t) {
    Pencil P = fixtures::random_pencil(1 + t % 6);
    auto e = verified_discrete_eigs(P);
    auto ref = fixtures::oracle_eigs(P);
    for (int k = 0; k < P.dim(); ++k, ++total) contained += oracle::inside(e[k], ref[k]);
  }
  o.require(contained == total, "oracle containment");
  auto w = two_sided_bounds({Interval(10.0)}, Interval(0.125), Interval(0.64));  // C_N^2 supW = 0.01
  double lo = w.lambda[0].lo();
  o.require(std::fabs(lo - 10 / 1.1) <= 1e-12 && lo <= 10 / 1.1, "10/1.1");
  o.detail << contained << "/" << total << " eigenvalues contained, lower bound " << fmt("%.15g", lo);
}

// 6
void theorem_arith(Outcome& o) {
  RationalExp p(3, 2);
  auto C = make_constants(p, 14);
  Interval c = g_coefficient(p, C);
  Interval delta = Interval::from_string("0.1871519"), K = Interval::from_string("2.0000005");
  auto a = find_alpha(delta, K, c, p);
  o.require(a.alpha <= 0.391, "alpha <= 0.391");
  o.require(existence_holds(delta, K, c, p, a.alpha), "both inequalities");
  mp al("0.3909193"), k("2.0000005");
  mp cref = mp(1.5) * bmp::pow(1 / (bmp::sqrt(mp(2)) * oracle::pi()), mp(1.5)) / oracle::pi();
  mp lhs = al / k - cref / mp(1.5) * bmp::pow(al, mp(1.5));
  o.require(bmp::abs(lhs - mp("0.1871519")) < mp("5e-6"), "delta to 5 decimals");
  o.detail << "alpha " << fmt("%.9g", a.alpha) << ", Kg " << fmt("%.6g", a.kg.hi()) << ", lhs at 0.3909193 "
           << fmt("%.9g", static_cast<double>(lhs));
}

// 7
void end_to_end(Outcome& o) {
  RunConfig cfg;  // N_u = 60, N = 14
  cfg.out = "acceptance_certificate.json";
  auto t0 = std::chrono::steady_clock::now();
  auto cert = run_verify(cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(cert.valid(), "valid certificate (" + cert.status + ")");
  if (!cert.residual || !cert.K || !cert.alpha || !cert.r2 || !cert.positivity) {
    o.require(false, "missing fields");
    return;
  }
  o.require(cert.residual->overlaps(Interval(0.8311281 - 0.01, 0.8314938 + 0.01)), "residual band");
  o.require(cert.delta->hi() <= 0.20, "delta");
  o.require(cert.K->hi() <= 2.01, "K");
  o.require(cert.alpha->alpha <= 0.40, "r1");
  o.require(cert.r2->hi() <= 1.20, "r2");
  o.require(cert.positivity->positive && cert.positivity->bound.hi() < 2 * M_PI * M_PI, "positivity");
  std::ifstream f(cfg.out);
  std::stringstream ss;
  ss << f.rdbuf();
  o.require(recheck_certificate(ss.str()), "recheck");
  o.detail << "residual " << to_string(*cert.residual) << ", delta " << fmt("%.7g", cert.delta->hi()) << ", K "
           << fmt("%.8g", cert.K->hi()) << ", r1 " << fmt("%.7g", cert.alpha->alpha) << ", r2 "
           << fmt("%.7g", cert.r2->hi()) << ", sqrt(u-) bound " << fmt("%.7g", cert.positivity->bound.hi())
           << ", amplitude " << to_string(*cert.amplitude) << ", " << fmt("%.0f", secs) << " s";
}

// 8
mp member(const PowerSeries1D& u, const std::vector<double>& c, const mp& x) {
  mp s = 0;
  for (int i = u.degree(); i >= 0; --i) s = s * x + mp(c[i]);
  return s;
}

std::vector<double> pick(const PowerSeries1D& u) {
  std::vector<double> c(u.degree() + 1);
  for (int i = 0; i <= u.degree(); ++i) c[i] = oracle::uniform(u[i].lo(), u[i].hi());
  return c;
}

PowerSeries1D random_model(int n, const Interval& d, double width) {
  IVector c(n + 1);
  for (int i = 0; i <= n; ++i) {
    double m = oracle::uniform(-1, 1) / (1 + i), w = oracle::uniform(0, width);
    c[i] = Interval(m - w, m + w);
  }
  return {c, d};
}

Interval sub_interval(const Interval& X) {
  double a = oracle::uniform(X.lo(), X.hi()), b = oracle::uniform(X.lo(), X.hi());
  return Interval(std::min(a, b), std::max(a, b));
}

void properties(Outcome& o) {
  // ||a+b|^q - |a|^q| <= |b|^q
  int lemma_bad = 0;
  for (int t = 0; t < 100000; ++t) {
    double a = oracle::uniform(-10, 10), b = oracle::uniform(-10, 10);
    if (t % 10 == 0) b = oracle::uniform(-1e-3, 1e-3);
    RationalExp q(1 + static_cast<int>(oracle::uniform(0, 998)), 1000);
    Interval lhs = abs(pow(abs(Interval(a) + Interval(b)), q) - pow(abs(Interval(a)), q));
    lemma_bad += !(lhs.lo() <= pow(abs(Interval(b)), q).hi() + 1e-12);
  }
  o.require(lemma_bad == 0, "power difference bound");

  // PSA containment, 1000 models per operation class
  const Interval d(-0.3, 0.5);
  using Op = std::function<bool(const PowerSeries1D&, const PowerSeries1D&)>;
  auto unary = [&](ElemFn f, double shift, std::function<mp(const mp&)> ref) -> Op {
    return [=](const PowerSeries1D& a, const PowerSeries1D&) {
      auto r = compose(f, a + Interval(shift));
      auto c = pick(a);
      for (int s = 0; s < 3; ++s) {
        double x = oracle::uniform(d.lo(), d.hi());
        if (!oracle::inside(eval(r, Interval(x)), ref(member(a, c, mp(x)) + shift))) return false;
      }
      return true;
    };
  };
  auto binary = [&](std::function<PowerSeries1D(const PowerSeries1D&, const PowerSeries1D&)> f,
                    std::function<mp(const mp&, const mp&)> ref) -> Op {
    return [=](const PowerSeries1D& a, const PowerSeries1D& b) {
      auto r = f(a, b);
      auto ca = pick(a), cb = pick(b);
      for (int s = 0; s < 3; ++s) {
        double x = oracle::uniform(d.lo(), d.hi());
        if (!oracle::inside(eval(r, Interval(x)), ref(member(a, ca, mp(x)), member(b, cb, mp(x))))) return false;
      }
      return true;
    };
  };
  std::vector<std::pair<std::string, Op>> classes = {
      {"add", binary([](auto& a, auto& b) { return a + b; }, [](auto& x, auto& y) { return x + y; })},
      {"sub", binary([](auto& a, auto& b) { return a - b; }, [](auto& x, auto& y) { return x - y; })},
      {"mul", binary([](auto& a, auto& b) { return a * b; }, [](auto& x, auto& y) { return x * y; })},
      {"reduce", binary([](auto& a, auto& b) { return reduce_degree(mul_full(a, b), 1); },
                        [](auto& x, auto& y) { return x * y; })},
      {"sqrt", unary(ElemFn::pow(RationalExp(1, 2)), 3, [](auto& x) { return bmp::sqrt(x); })},
      {"pow3/2", unary(ElemFn::pow(RationalExp(3, 2)), 3, [](auto& x) { return bmp::pow(x, mp(1.5)); })},
      {"log", unary(ElemFn::log(), 3, [](auto& x) { return bmp::log(x); })},
      {"exp", unary(ElemFn::exp(), 0, [](auto& x) { return bmp::exp(x); })},
      {"sin", unary(ElemFn::sin(), 0, [](auto& x) { return bmp::sin(x); })},
      {"sinpi", unary(ElemFn::sinpi(), 0, [](auto& x) { return bmp::sin(oracle::pi() * x); })},
      {"recip", unary(ElemFn::recip(), 3, [](auto& x) { return 1 / x; })},
  };
  std::string psa_bad;
  for (auto& [name, op] : classes) {
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
      int n = 2 + t % 6;
      bad += !op(random_model(n, d, 1e-6), random_model(n, d, 1e-6));
    }
    if (bad) psa_bad += " " + name;
  }
  o.require(psa_bad.empty(), "PSA containment:" + psa_bad);

  // inclusion monotonicity of interval operations
  using IOp = std::function<Interval(const Interval&, const Interval&)>;
  std::vector<std::pair<std::string, IOp>> iops = {
      {"+", [](auto& a, auto& b) { return a + b; }},
      {"-", [](auto& a, auto& b) { return a - b; }},
      {"*", [](auto& a, auto& b) { return a * b; }},
      {"/", [](auto& a, auto& b) { return a / (abs(b) + 0.5); }},
      {"sqr", [](auto& a, auto&) { return sqr(a); }},
      {"sqrt", [](auto& a, auto&) { return sqrt(abs(a)); }},
      {"exp", [](auto& a, auto&) { return exp(a); }},
      {"log", [](auto& a, auto&) { return log(abs(a) + 0.1); }},
      {"sin", [](auto& a, auto&) { return sin(a); }},
      {"cos", [](auto& a, auto&) { return cos(a); }},
      {"pow5", [](auto& a, auto&) { return pow(a, 5); }},
      {"pow7/3", [](auto& a, auto&) { return pow(abs(a), RationalExp(7, 3)); }},
  };
  std::string mono_bad;
  for (auto& [name, f] : iops) {
    int bad = 0;
    for (int t = 0; t < 10000; ++t) {
      double c1 = oracle::uniform(-4, 4), c2 = oracle::uniform(-4, 4);
      Interval X(c1 - oracle::uniform(0, 2), c1 + oracle::uniform(0, 2));
      Interval Y(c2 - oracle::uniform(0, 2), c2 + oracle::uniform(0, 2));
      bad += !f(X, Y).contains(f(sub_interval(X), sub_interval(Y)));
    }
    if (bad) mono_bad += " " + name;
  }
  o.require(mono_bad.empty(), "monotonicity:" + mono_bad);

  // determinism of certificate bodies across reruns and worker counts
  RunConfig cfg;
  cfg.modes = 20;
  cfg.eig_dim = 9;
  cfg.workers = 1;
  std::string b1 = certificate_body_json(run_verify(cfg));
  std::string b2 = certificate_body_json(run_verify(cfg));
  cfg.workers = 3;
  std::string b3 = certificate_body_json(run_verify(cfg));
  o.require(b1 == b2 && b1 == b3, "determinism");
  o.detail << "power difference bound 1e5 cases, PSA " << classes.size() << " classes x 1000, " << iops.size()
           << " interval ops x 1e4, 3 identical certificate bodies";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    void (*fn)(Outcome&);
  };
  const Criterion all[] = {
      {1, "constants", constants},
      {2, "power series worked examples", psa_golden},
      {3, "interval-order integration", interval_order},
      {4, "quadrature oracle suite", quadrature},
      {5, "eigenvalue enclosure oracle", eigen_oracle},
      {6, "existence-test arithmetic", theorem_arith},
      {7, "end-to-end run, N_u=60, N=14", end_to_end},
      {8, "property suites", properties},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    try {
      c.fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
