#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "semilin/pipeline.hpp"
#include "semilin/psa.hpp"

using namespace semilin;

namespace {

constexpr int kValid = 0, kFailed = 2, kUsage = 64;

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print(const char* name, const Interval& x) { std::printf("%-10s [%.17g, %.17g]\n", name, x.lo(), x.hi()); }

int cmd_constants(RationalExp p, int eig_dim) {
  Interval c2 = poincare_c2(), c4 = embedding_constant(4);
  print("C2", c2);
  print("C4", c4);
  if (!(p == RationalExp(2) || p == RationalExp(4))) print(("C_" + p.str()).c_str(), lebesgue_constant(p));
  print(("C_N(" + std::to_string(eig_dim) + ")").c_str(), projection_constant(eig_dim));
  print("lambda1", 2 * sqr(pi()));
  return kValid;
}

struct Golden {
  std::string name;
  bool ok;
};

int cmd_psa_selftest() {
  const Interval d(0.0, Interval::from_string("0.1").hi());
  auto poly = [&](double a, double b, double c) {
    IVector v(3);
    v << Interval(a), Interval(b), Interval(c);
    return PowerSeries1D(v, d);
  };
  auto ulp = [](double x) { return detail::next_up(std::fabs(x)) - std::fabs(x); };
  auto a = poly(1, 2, -3), b = poly(1, -1, 1);
  auto exact = [](const PowerSeries1D& m, double c0, double c1, double c2) {
    return m[0] == Interval(c0) && m[1] == Interval(c1) && m[2] == Interval(c2);
  };
  std::vector<Golden> cases;
  cases.push_back({"sum 2+x-2x^2", exact(a + b, 2, 1, -2)});
  cases.push_back({"difference 0+3x-4x^2", exact(a - b, 0, 3, -4)});
  auto m = a * b;
  cases.push_back({"product 1+x+[-4,-3.5]x^2", m[0] == Interval(1.0) && m[1] == Interval(1.0) &&
                                                   m[2].contains(Interval(-4.0, -3.5)) &&
                                                   m[2].lo() >= -4 - 4 * ulp(4) && m[2].hi() <= -3.5 + 4 * ulp(3.5)});
  auto l = compose(ElemFn::log(), a);
  cases.push_back({"log composition x^2 in [-5,-143/36]",
                   l[0].contains(0.0) && l[1].contains(2.0) && l[2].contains(Interval(-5.0, -143.0 / 36)) &&
                       l[2].lo() >= -5 - 1e-12 && l[2].hi() <= -143.0 / 36 + 1e-12});
  int bad = 0;
  for (auto& c : cases) {
    std::printf("%s %s\n", c.ok ? "PASS" : "FAIL", c.name.c_str());
    bad += !c.ok;
  }
  return bad ? kFailed : kValid;
}

int cmd_plot(const std::string& coeffs_in, int modes, RationalExp p, int grid, double r2, const std::string& out) {
  if (grid < 1) throw UsageError("--grid must be >= 1");
  FourierApproximation u;
  if (!coeffs_in.empty()) {
    u = load_coefficients(coeffs_in);
  } else {
    GalerkinConfig g;
    g.max_mode = modes;
    g.p = p;
    u = newton_solve(g);
  }
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw UsageError("cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "x,y,u,lower,upper\n";
  char buf[160];
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      double x = static_cast<double>(i) / grid, y = static_cast<double>(j) / grid;
      double v = eval(u, x, y);
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.12g,%.12g,%.12g\n", x, y, v, v - r2, v + r2);
      os << buf;
    }
  return kValid;
}

void summary(const ProofCertificate& c) {
  std::fprintf(stderr, "status: %s\n", c.status.c_str());
  if (!c.message.empty()) std::fprintf(stderr, "  %s\n", c.message.c_str());
  auto line = [](const char* n, const std::optional<Interval>& x) {
    if (x) std::fprintf(stderr, "  %-10s [%.10g, %.10g]\n", n, x->lo(), x->hi());
  };
  line("residual", c.residual);
  line("delta", c.delta);
  line("K", c.K);
  line("r1", c.r1);
  line("r2", c.r2);
  if (c.positivity)
    std::fprintf(stderr, "  positivity bound %.10g < %.10g: %s\n", c.positivity->bound.hi(), c.positivity->lambda1.lo(),
                 c.positivity->positive ? "yes" : "no");
  line("amplitude", c.amplitude);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verified existence and positivity for -Laplace(u) = |u|^{p-1} u on the unit square"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run the full verification and emit a certificate");
  std::string p_s, holder_s, linf_s, tail_s, config_path, coeffs_in, coeffs_out, out;
  int modes = 0, eig_dim = 0, grid = 0, degree = 0, workers = 0, depth = 0;
  double rel_tol = 0;
  bool verbose = false;
  auto* o_p = verify->add_option("--p", p_s, "exponent in (1,2), e.g. 3/2");
  auto* o_modes = verify->add_option("--modes", modes, "N_u, largest Galerkin mode (default 60)");
  auto* o_eig = verify->add_option("--eig-dim", eig_dim, "N, largest mode of the eigenvalue subspace (default 14)");
  auto* o_grid = verify->add_option("--grid", grid, "base subdivision per axis, a power of two (default 16)");
  auto* o_deg = verify->add_option("--psa-degree", degree, "power series degree on each cell (default 12)");
  auto* o_tol = verify->add_option("--rel-tol", rel_tol, "relative width that stops cell refinement (default 1e-11)");
  auto* o_depth = verify->add_option("--max-depth", depth, "largest refinement depth (default 12)");
  auto* o_holder = verify->add_option("--holder", holder_s, "Hölder triple q,r,s (default 4,4,2)");
  auto* o_linf = verify->add_option("--linf", linf_s, "exponents q,r of the L-infinity estimate (default 4,2)");
  auto* o_tail = verify->add_option("--tail-threshold", tail_s, "lower bound required of the last eigenvalue, or none");
  auto* o_workers = verify->add_option("--workers", workers, "worker threads (default: hardware)");
  auto* o_in = verify->add_option("--coeffs-in", coeffs_in, "read u_hat coefficients instead of solving");
  auto* o_cout = verify->add_option("--coeffs-out", coeffs_out, "write u_hat coefficients");
  auto* o_out = verify->add_option("--out", out, "certificate path (default: stdout)");
  verify->add_option("--config", config_path, "JSON config file; flags override it");
  verify->add_flag("-v,--verbose", verbose, "progress on stderr");

  auto* constants = app.add_subcommand("constants", "print embedding and projection constants");
  std::string cp_s = "4";
  int c_eig = 14;
  constants->add_option("--p", cp_s, "embedding exponent for an extra C_p line");
  constants->add_option("--eig-dim", c_eig, "N for C_N");

  auto* selftest = app.add_subcommand("psa-selftest", "reproduce the worked power series examples");

  auto* plot = app.add_subcommand("plot-data", "CSV samples of u_hat on a uniform grid");
  std::string pl_in, pl_out, pl_p = "3/2";
  int pl_grid = 64, pl_modes = 60;
  double pl_r2 = 0;
  plot->add_option("--grid", pl_grid, "intervals per axis (grid+1 points)");
  plot->add_option("--coeffs-in", pl_in, "coefficients file");
  plot->add_option("--modes", pl_modes, "N_u when solving");
  plot->add_option("--p", pl_p, "exponent when solving");
  plot->add_option("--r2", pl_r2, "L-infinity radius for the lower/upper bands");
  plot->add_option("--out", pl_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*constants) return cmd_constants(RationalExp::parse(cp_s), c_eig);
    if (*selftest) return cmd_psa_selftest();
    if (*plot) return cmd_plot(pl_in, pl_modes, RationalExp::parse(pl_p), pl_grid, pl_r2, pl_out);

    RunConfig cfg;
    if (!config_path.empty()) apply_config_json(cfg, read_file(config_path));
    if (*o_p) cfg.p = RationalExp::parse(p_s);
    if (*o_modes) cfg.modes = modes;
    if (*o_eig) cfg.eig_dim = eig_dim;
    if (*o_grid) cfg.grid = grid;
    if (*o_deg) cfg.psa_degree = degree;
    if (*o_tol) cfg.rel_tol = rel_tol;
    if (*o_depth) cfg.max_depth = depth;
    if (*o_holder) cfg.holder = parse_holder(holder_s);
    if (*o_linf) cfg.linf = parse_linf(linf_s);
    if (*o_tail) cfg.tail_threshold = tail_s == "none" ? std::nullopt : std::optional(std::stod(tail_s));
    if (*o_workers) cfg.workers = workers;
    if (*o_in) cfg.coeffs_in = coeffs_in;
    if (*o_cout) cfg.coeffs_out = coeffs_out;
    if (*o_out) cfg.out = out;

    ProofCertificate cert = run_verify(cfg, verbose ? &std::cerr : nullptr);
    if (cfg.out.empty()) std::cout << certificate_to_json(cert) << "\n";
    summary(cert);
    return cert.valid() ? kValid : kFailed;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
}
