#include "semilin/certify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace semilin {

using nlohmann::json;

HolderTriple parse_holder(const std::string& text) {
  std::vector<RationalExp> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(RationalExp::parse(item));
  if (v.size() != 3) throw UsageError("holder triple must be q,r,s");
  return {v[0], v[1], v[2]};
}

LinfChoice parse_linf(const std::string& text) {
  auto pos = text.find(',');
  if (pos == std::string::npos || text.find(',', pos + 1) != std::string::npos) throw UsageError("linf choice must be q,r");
  return {RationalExp::parse(text.substr(0, pos)), RationalExp::parse(text.substr(pos + 1))};
}

Interval poincare_c2() { return sqrt(Interval(0.5) / sqr(pi())); }

Interval embedding_constant(RationalExp p, const Interval& area) {
  if (!(p > RationalExp(2))) throw UsageError("embedding_constant needs p > 2; use poincare_c2 for p = 2");
  if (!(area.lo() > 0)) throw UsageError("embedding_constant: area must be positive");
  const RationalExp q = RationalExp(2) * p / (RationalExp(2) + p);
  const RationalExp inv_q = RationalExp(1) / q;
  // n = 2: Gamma(1 + n/2) Gamma(n) = 1
  Interval t = Interval(1.0) / sqrt(pi());
  t *= pow(Interval(2.0), -inv_q);
  t *= pow(Interval::from_rational(q - 1) / Interval::from_rational(RationalExp(2) - q), RationalExp(1) - inv_q);
  Interval g = gamma_half(RationalExp(2) * inv_q) * gamma_half(RationalExp(3) - RationalExp(2) * inv_q);
  t *= sqrt(Interval(1.0) / g);
  return pow(area, (RationalExp(2) - q) / (RationalExp(2) * q)) * t;
}

Interval lebesgue_constant(RationalExp s) {
  if (s < RationalExp(1)) throw UsageError("lebesgue_constant: exponent must be >= 1");
  if (s <= RationalExp(2)) return poincare_c2();  // |Omega| = 1
  if (s < RationalExp(4)) {
    // 1/s = theta/2 + (1 - theta)/4
    RationalExp theta = RationalExp(4) / s - 1;
    return pow(poincare_c2(), theta) * pow(embedding_constant(4), RationalExp(1) - theta);
  }
  return embedding_constant(s);
}

VerificationConstants make_constants(RationalExp p, int eig_dim, HolderTriple h, LinfChoice l) {
  if (!(p > RationalExp(1) && p < RationalExp(2))) throw UsageError("p must lie in (1, 2)");
  VerificationConstants C;
  C.p = p;
  C.p_prime = RationalExp(2) * (p - 1);
  C.holder = h;
  C.linf = l;
  C.C2 = poincare_c2();
  C.C4 = embedding_constant(4);
  C.gamma0 = Interval(1.0);
  C.gamma1 = Interval::from_string("1.1548");
  C.gamma2 = Interval::from_string("0.22361");
  C.c0 = C.gamma0;
  C.c1 = sqrt(Interval(2.0) / 3) * C.gamma1;
  C.c2 = C.gamma2 / 3 * sqrt(Interval(28.0) / 5);
  C.eig_dim = eig_dim;
  C.c_n = projection_constant(eig_dim);
  C.lambda1 = 2 * sqr(pi());
  return C;
}

void check_holder(RationalExp p, const HolderTriple& h) {
  for (RationalExp e : {h.q, h.r, h.s})
    if (e < RationalExp(1)) throw UsageError("holder exponents must be >= 1");
  if (!(RationalExp(1) / h.q + RationalExp(1) / h.r + RationalExp(1) / h.s == RationalExp(1)))
    throw UsageError("holder triple must satisfy 1/q + 1/r + 1/s = 1");
  if (h.q * (p - 1) < RationalExp(1)) throw UsageError("holder triple must satisfy q(p-1) >= 1");
}

Interval g_coefficient(RationalExp p, const VerificationConstants& C) { return g_coefficient(p, C, C.holder); }

Interval g_coefficient(RationalExp p, const VerificationConstants& C, const HolderTriple& h) {
  check_holder(p, h);
  auto cs = [&](RationalExp s) {
    if (s == RationalExp(2)) return C.C2;
    if (s == RationalExp(4)) return C.C4;
    return lebesgue_constant(s);
  };
  return Interval::from_rational(p) * cs(h.r) * cs(h.s) * pow(cs(h.q * (p - 1)), p - 1);
}

namespace {

struct Gate {
  Interval margin, kg;
};

Gate gate(const Interval& delta, const Interval& K, const Interval& c, RationalExp p, double alpha) {
  Interval a(alpha);
  Interval lhs = a / K - c / Interval::from_rational(p) * pow(a, p);
  return {lhs - delta, K * c * pow(a, p - 1)};
}

}  // namespace

bool existence_holds(const Interval& delta, const Interval& K, const Interval& c, RationalExp p, double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) return false;
  Gate g = gate(delta, K, c, p, alpha);
  return g.margin.lo() >= 0 && g.kg.hi() < 1;
}

AlphaSearch find_alpha(const Interval& delta, const Interval& K, const Interval& c, RationalExp p) {
  if (delta.lo() < 0 || !(K.lo() > 0) || c.lo() < 0) throw UsageError("find_alpha: need delta >= 0, K > 0, c >= 0");
  const double k = K.hi(), cc = c.hi(), d = delta.hi(), pe = p.to_double();
  auto f = [&](double a) { return a / k - cc / pe * std::pow(a, pe) - d; };
  double a0;
  double cap = std::numeric_limits<double>::infinity();
  if (cc == 0) {
    a0 = k * d;
  } else {
    // f increases up to K g(a) = 1
    cap = std::pow(1 / (k * cc), 1 / (pe - 1));
    if (!(f(cap) > 0)) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "no alpha satisfies the existence inequalities: max of alpha/K - G(alpha) is %.7g at alpha=%.7g, "
                    "delta=%.7g",
                    f(cap) + d, cap, d);
      throw VerificationError(buf);
    }
    double lo = 0, hi = cap;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (lo + hi);
      (f(m) < 0 ? lo : hi) = m;
    }
    a0 = hi;
  }
  if (!(a0 > 0)) a0 = std::numeric_limits<double>::min();
  // Verify against slightly larger data so that a re-parsed certificate,
  // whose decimals re-enclose each endpoint, still passes.
  const double up = 1 + 0x1p-40;
  const Interval dv(detail::mul_up(delta.hi(), up)), kv(detail::mul_up(K.hi(), up)), cv(detail::mul_up(c.hi(), up));
  AlphaSearch r;
  // relative steps from 2^-50 up to 2^-20
  double step = 0x1p-50;
  for (double a = a0; a <= cap * (1 + 1e-9) && r.inflations < 1 << 16;
       a *= 1 + step, step = std::fmin(2 * step, 0x1p-20), ++r.inflations) {
    Gate g = gate(dv, kv, cv, p, a);
    if (g.margin.lo() >= 0 && g.kg.hi() < 1) {
      Gate exact = gate(delta, K, c, p, a);
      r.alpha = a;
      r.margin = exact.margin;
      r.kg = exact.kg;
      return r;
    }
  }
  throw VerificationError("existence inequalities could not be verified near alpha=" + std::to_string(a0));
}

Interval delta_from_residual(const Interval& res, const Interval& C2) { return C2 * res; }

Interval solution_norm_term(const PowerIntegrator& in, RationalExp p, const LinfChoice& l) {
  const RationalExp pp = RationalExp(2) * (p - 1);
  const RationalExp e = l.r * pp;
  if (e == RationalExp(2)) return pow(l2_norm_enclosure(in.eta()), pp);
  return pow(in.integral_power_unit(e), RationalExp(1) / l.r);
}

Interval linf_bound(const Interval& eps, const Interval& norm_term, const Interval& res,
                    const VerificationConstants& C, RationalExp p) {
  const RationalExp q = C.linf.q, r = C.linf.r;
  const RationalExp pp = RationalExp(2) * (p - 1);
  if (q < RationalExp(2) || r * (p - 1) < RationalExp(1) || !(RationalExp(2) / q + RationalExp(1) / r == RationalExp(1)))
    throw UsageError("L-infinity exponents must satisfy q >= 2, r >= 1/(p-1), 2/q + 1/r = 1");
  if (eps.lo() < 0 || res.lo() < 0) throw UsageError("linf_bound: negative input");
  Interval fac(1.0);
  if (pp > RationalExp(1)) fac = pow(Interval(2.0), (pp - 1) / 2);
  auto cs = [&](RationalExp s) {
    if (s == RationalExp(2)) return C.C2;
    if (s == RationalExp(4)) return C.C4;
    return lebesgue_constant(s);
  };
  Interval tail = pow(eps, pp) / Interval::from_rational(pp + 1) * pow(cs(r * pp), pp);
  Interval inner = fac * Interval::from_rational(p) * eps * cs(q) * sqrt(norm_term + tail) + res;
  return C.c0 * C.C2 * eps + C.c1 * eps + C.c2 * inner;
}

Interval linf_bound(const Interval& eps, const PowerIntegrator& in, const Interval& res,
                    const VerificationConstants& C, RationalExp p) {
  return linf_bound(eps, solution_norm_term(in, p, C.linf), res, C, p);
}

PositivityResult positivity_from(const Interval& min_u, std::optional<std::pair<Interval, Rect>> witness,
                                 const Interval& r2, RationalExp p, const Interval& lambda1) {
  PositivityResult r;
  r.min_u = min_u;
  r.lambda1 = lambda1;
  r.bound = pow(abs(min_u) + r2, p - 1);
  if (witness) {
    r.witness_range = witness->first;
    r.witness_cell = witness->second;
    r.witness = witness->first.lo() > r2.hi();
  }
  r.positive = r.witness && r.bound.hi() < lambda1.lo();
  return r;
}

PositivityResult positivity_check(const PowerIntegrator& in, const Interval& r2, RationalExp p,
                                  const Interval& lambda1) {
  return positivity_from(in.min_enclosure(), in.positivity_witness(), r2, p, lambda1);
}

Interval amplitude_enclosure(const Interval& max_u, const Interval& r2) {
  return Interval(detail::sub_down(max_u.lo(), r2.hi()), detail::add_up(max_u.hi(), r2.hi()));
}

Interval amplitude_enclosure(const PowerIntegrator& in, const Interval& r2) {
  return amplitude_enclosure(in.max_enclosure(), r2);
}

void finalize_certificate(ProofCertificate& cert) {
  if (cert.status.rfind("failed", 0) == 0) return;
  if (!cert.residual || !cert.delta || !cert.K || !cert.c || !cert.alpha || !cert.r2 || !cert.positivity) {
    cert.status = "failed: incomplete";
    return;
  }
  if (!existence_holds(*cert.delta, *cert.K, *cert.c, cert.p, cert.alpha->alpha)) {
    cert.status = "failed: existence-test";
    cert.message = "existence inequalities do not re-verify from the stored intervals";
    return;
  }
  if (!cert.positivity->positive) {
    cert.status = "failed: positivity";
    cert.message = cert.positivity->witness ? "bound on sup u_- not below lambda_1" : "no cell with u_hat > r2 found";
    return;
  }
  cert.status = "valid";
}

namespace {

std::string dec(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json ij(const Interval& x) { return json::array({dec(x.lo()), dec(x.hi())}); }

Interval parse_ij(const json& j) {
  return hull(Interval::from_string(j.at(0).get<std::string>()), Interval::from_string(j.at(1).get<std::string>()));
}

json body(const ProofCertificate& c) {
  json j;
  j["status"] = c.status;
  j["message"] = c.message;
  j["p"] = c.p.str();
  j["config"] = c.config;
  j["constants"] = {{"C2", ij(c.C2)}, {"C4", ij(c.C4)}, {"C_N", ij(c.c_n)}};
  if (c.c) j["constants"]["g_coefficient"] = ij(*c.c);
  if (c.residual) j["residual_norm"] = ij(*c.residual);
  if (c.delta) j["delta"] = ij(*c.delta);
  if (!c.eigenvalues.empty()) {
    j["eigenvalues"] = json::array();
    for (auto& e : c.eigenvalues) j["eigenvalues"].push_back(ij(e));
  }
  if (c.kbound) {
    j["mu0"] = ij(c.kbound->mu0);
    j["K_argmin"] = c.kbound->argmin;
  }
  if (c.K) j["K"] = ij(*c.K);
  if (c.alpha) {
    j["r1"] = dec(c.alpha->alpha);
    j["existence"] = {{"margin", ij(c.alpha->margin)}, {"Kg", ij(c.alpha->kg)}, {"inflations", c.alpha->inflations}};
  }
  if (c.r2) j["r2"] = ij(*c.r2);
  if (c.positivity) {
    const auto& q = *c.positivity;
    j["positivity"] = {{"min_u", ij(q.min_u)},
                       {"bound", ij(q.bound)},
                       {"lambda1", ij(q.lambda1)},
                       {"witness", q.witness},
                       {"positive", q.positive}};
    if (q.witness)
      j["positivity"]["witness_cell"] = {{"x", {q.witness_cell.x0, q.witness_cell.x1}},
                                         {"y", {q.witness_cell.y0, q.witness_cell.y1}},
                                         {"range", ij(q.witness_range)}};
  }
  if (c.amplitude) j["amplitude"] = ij(*c.amplitude);
  return j;
}

}  // namespace

std::string certificate_body_json(const ProofCertificate& cert) { return body(cert).dump(2); }

std::string certificate_to_json(const ProofCertificate& cert) {
  json j = body(cert);
  j["meta"] = cert.meta;
  return j.dump(2);
}

bool recheck_certificate(const std::string& json_text) {
  json j = json::parse(json_text);
  if (j.at("status") != "valid") return false;
  RationalExp p = RationalExp::parse(j.at("p").get<std::string>());
  Interval delta = parse_ij(j.at("delta")), K = parse_ij(j.at("K")), c = parse_ij(j.at("constants").at("g_coefficient"));
  Interval res = parse_ij(j.at("residual_norm")), C2 = parse_ij(j.at("constants").at("C2"));
  delta = hull(delta, delta_from_residual(res, C2));
  double alpha = std::strtod(j.at("r1").get<std::string>().c_str(), nullptr);
  if (!existence_holds(delta, K, c, p, alpha)) return false;
  const json& q = j.at("positivity");
  Interval r2 = parse_ij(j.at("r2"));
  Interval bound = pow(abs(parse_ij(q.at("min_u"))) + r2, p - 1);
  if (!(bound.hi() < parse_ij(q.at("lambda1")).lo())) return false;
  return q.at("witness").get<bool>() && parse_ij(q.at("witness_cell").at("range")).lo() > r2.hi();
}

}  // namespace semilin
