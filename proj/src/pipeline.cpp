#include "semilin/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace semilin {

using nlohmann::json;

void validate(const RunConfig& cfg) {
  if (!(cfg.p > RationalExp(1) && cfg.p < RationalExp(2))) throw UsageError("--p must lie in (1, 2)");
  if (cfg.modes < 1 || cfg.eig_dim < 1) throw UsageError("--modes and --eig-dim must be >= 1");
  if (cfg.grid < 1 || (cfg.grid & (cfg.grid - 1)) != 0) throw UsageError("--grid must be a power of two");
  if (cfg.psa_degree < 1) throw UsageError("--psa-degree must be >= 1");
  if (!(cfg.rel_tol > 0)) throw UsageError("--rel-tol must be positive");
  if (cfg.max_depth < 0) throw UsageError("--max-depth must be >= 0");
  if (cfg.workers < 0) throw UsageError("--workers must be >= 0");
  check_holder(cfg.p, cfg.holder);
  const RationalExp q = cfg.linf.q, r = cfg.linf.r;
  if (q < RationalExp(2) || r * (cfg.p - 1) < RationalExp(1) || !(RationalExp(2) / q + RationalExp(1) / r == RationalExp(1)))
    throw UsageError("L-infinity exponents must satisfy q >= 2, r >= 1/(p-1), 2/q + 1/r = 1");
}

namespace {

std::string str_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string holder_str(const HolderTriple& h) { return h.q.str() + "," + h.r.str() + "," + h.s.str(); }

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

void apply_config_json(RunConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  for (auto& [k, v] : j.items()) {
    try {
      if (k == "p") cfg.p = RationalExp::parse(str_of(v));
      else if (k == "modes") cfg.modes = v.get<int>();
      else if (k == "eig-dim") cfg.eig_dim = v.get<int>();
      else if (k == "grid") cfg.grid = v.get<int>();
      else if (k == "psa-degree") cfg.psa_degree = v.get<int>();
      else if (k == "rel-tol") cfg.rel_tol = v.get<double>();
      else if (k == "max-depth") cfg.max_depth = v.get<int>();
      else if (k == "holder") cfg.holder = parse_holder(v.get<std::string>());
      else if (k == "linf") cfg.linf = parse_linf(v.get<std::string>());
      else if (k == "tail-threshold") cfg.tail_threshold = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (k == "workers") cfg.workers = v.get<int>();
      else if (k == "coeffs-in") cfg.coeffs_in = v.get<std::string>();
      else if (k == "coeffs-out") cfg.coeffs_out = v.get<std::string>();
      else if (k == "out") cfg.out = v.get<std::string>();
      else throw UsageError("config: unknown key '" + k + "'");
    } catch (const json::exception& e) {
      throw UsageError("config: bad value for '" + k + "': " + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError("config: bad value for '" + k + "': " + e.what());
    }
  }
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
  char tol[32];
  std::snprintf(tol, sizeof tol, "%.17g", cfg.rel_tol);
  std::map<std::string, std::string> m{
      {"p", cfg.p.str()},
      {"modes", std::to_string(cfg.modes)},
      {"eig-dim", std::to_string(cfg.eig_dim)},
      {"grid", std::to_string(cfg.grid)},
      {"psa-degree", std::to_string(cfg.psa_degree)},
      {"rel-tol", tol},
      {"max-depth", std::to_string(cfg.max_depth)},
      {"holder", holder_str(cfg.holder)},
      {"linf", cfg.linf.q.str() + "," + cfg.linf.r.str()},
      {"tail-threshold", cfg.tail_threshold ? std::to_string(*cfg.tail_threshold) : "none"},
  };
  if (!cfg.coeffs_in.empty()) m["coeffs-in"] = cfg.coeffs_in;
  return m;
}

ProofCertificate run_verify(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto secs = [&] {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", std::chrono::duration<double>(clock::now() - t0).count());
    return std::string(b);
  };
  auto note = [&](const std::string& s) {
    if (log) *log << "[" << secs() << "s] " << s << std::endl;
  };

  ProofCertificate cert;
  cert.p = cfg.p;
  cert.config = config_echo(cfg);
  cert.meta["started"] = utc_now();
  cert.meta["workers"] = std::to_string(cfg.workers);
  const VerificationConstants C = make_constants(cfg.p, cfg.eig_dim, cfg.holder, cfg.linf);
  cert.C2 = C.C2;
  cert.C4 = C.C4;
  cert.c_n = C.c_n;

  std::string stage;
  auto fail = [&](const std::string& what) {
    cert.status = "failed: " + stage;
    cert.message = what;
    note(cert.status + ": " + what);
  };

  try {
    stage = "galerkin";
    FourierApproximation u;
    if (!cfg.coeffs_in.empty()) {
      u = load_coefficients(cfg.coeffs_in);
      note("loaded coefficients, max mode " + std::to_string(u.max_mode()));
    } else {
      GalerkinConfig g;
      g.max_mode = cfg.modes;
      g.p = cfg.p;
      auto rep = newton_iterate(g);
      u = rep.u;
      cert.meta["newton_iterations"] = std::to_string(rep.iterations);
      note("galerkin: " + std::to_string(rep.iterations) + " Newton steps");
    }
    if (!cfg.coeffs_out.empty()) save_coefficients(u, cfg.coeffs_out);
    cert.meta["modes_used"] = std::to_string(u.max_mode());

    stage = "quadrature";
    QuadConfig q;
    q.grid = cfg.grid;
    q.degree = cfg.psa_degree;
    q.rel_tol = cfg.rel_tol;
    q.max_depth = cfg.max_depth;
    q.workers = cfg.workers;
    PowerIntegrator in(u, q);
    cert.meta["cells"] = std::to_string(in.cell_count());
    note("quadrature: " + std::to_string(in.cell_count()) + " cells");

    stage = "residual";
    cert.residual = residual_l2(in, cfg.p);
    cert.delta = delta_from_residual(*cert.residual, C.C2);
    note("residual " + to_string(*cert.residual));

    stage = "inverse-bound";
    Pencil P = assemble_pencil(in, cfg.p, cfg.eig_dim);
    auto disc = verified_discrete_eigs(P);
    auto enc = two_sided_bounds(disc, C.c_n, sup_weight(in, cfg.p));
    for (std::size_t k = 0; k < enc.lambda.size() && k < 6; ++k) cert.eigenvalues.push_back(enc.lambda[k]);
    cert.kbound = compute_K(enc, cfg.tail_threshold);
    cert.K = Interval(cert.kbound->K.hi());
    note("K <= " + std::to_string(cert.K->hi()));

    stage = "existence-test";
    cert.c = g_coefficient(cfg.p, C);
    cert.alpha = find_alpha(*cert.delta, *cert.K, *cert.c, cfg.p);
    cert.r1 = Interval(cert.alpha->alpha);
    note("r1 = " + std::to_string(cert.alpha->alpha));

    stage = "linf-bound";
    cert.r2 = linf_bound(*cert.r1, in, *cert.residual, C, cfg.p);
    note("r2 <= " + std::to_string(cert.r2->hi()));

    stage = "positivity";
    cert.positivity = positivity_check(in, *cert.r2, cfg.p, C.lambda1);
    cert.amplitude = amplitude_enclosure(in, *cert.r2);
    finalize_certificate(cert);
    if (!cert.valid()) note(cert.status + ": " + cert.message);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  cert.meta["elapsed_seconds"] = secs();
  cert.meta["finished"] = utc_now();

  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw UsageError("cannot write " + cfg.out);
    f << certificate_to_json(cert) << "\n";
  }
  return cert;
}

}  // namespace semilin
