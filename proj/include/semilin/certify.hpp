#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semilin/spectral.hpp"

namespace semilin {

// (q, r, s) with 1/q + 1/r + 1/s = 1 for g(t) = p C_r C_s C_{q(p-1)}^{p-1} t^{p-1}.
struct HolderTriple {
  RationalExp q{4}, r{4}, s{2};
};
HolderTriple parse_holder(const std::string& text);  // "q,r,s"

// Exponents (q, r) of the L-infinity estimate, 2/q + 1/r = 1.
struct LinfChoice {
  RationalExp q{4}, r{2};
};
LinfChoice parse_linf(const std::string& text);  // "q,r"

// 1/(sqrt(2) pi) on the unit square.
Interval poincare_c2();
// |Omega|^{(2-q)/(2q)} T_p with q = 2p/(2+p), n = 2, p > 2.
Interval embedding_constant(RationalExp p, const Interval& area = Interval(1.0));
// C_s on the unit square for any s >= 1 that can be reached from C_2 and C_4:
// Hölder below 2, interpolation between 2 and 4, Talenti at 4.
Interval lebesgue_constant(RationalExp s);

struct VerificationConstants {
  RationalExp p{3, 2};
  RationalExp p_prime{1};  // 2(p-1)
  HolderTriple holder;
  LinfChoice linf;
  Interval C2, C4;
  Interval gamma0, gamma1, gamma2;
  Interval c0, c1, c2;  // L-infinity constants of the unit square
  Interval c_n;
  int eig_dim = 14;
  Interval lambda1;  // 2 pi^2
};
VerificationConstants make_constants(RationalExp p, int eig_dim, HolderTriple h = {}, LinfChoice l = {});

// Throws UsageError when the triple does not satisfy the side conditions.
void check_holder(RationalExp p, const HolderTriple& h);
Interval g_coefficient(RationalExp p, const VerificationConstants& C);
Interval g_coefficient(RationalExp p, const VerificationConstants& C, const HolderTriple& h);

struct AlphaSearch {
  double alpha = 0;
  Interval margin;  // alpha/K - G(alpha) - delta, enclosure
  Interval kg;      // K g(alpha), enclosure
  int inflations = 0;
};
// Smallest alpha (up to inflation) with delta <= alpha/K - (c/p) alpha^p and
// K c alpha^{p-1} < 1, both verified. Throws VerificationError otherwise.
AlphaSearch find_alpha(const Interval& delta, const Interval& K, const Interval& c, RationalExp p);
// Both inequalities at a given alpha, from interval data only.
bool existence_holds(const Interval& delta, const Interval& K, const Interval& c, RationalExp p, double alpha);

Interval delta_from_residual(const Interval& res, const Interval& C2);

// ||u_hat||_{L^{r p'}}^{p'}; exact from the coefficients when r p' = 2.
Interval solution_norm_term(const PowerIntegrator& in, RationalExp p, const LinfChoice& l);
Interval linf_bound(const Interval& eps, const Interval& norm_term, const Interval& res,
                    const VerificationConstants& C, RationalExp p);
Interval linf_bound(const Interval& eps, const PowerIntegrator& in, const Interval& res,
                    const VerificationConstants& C, RationalExp p);

struct PositivityResult {
  Interval min_u;
  Interval bound;  // (|min u_hat| + r2)^{p-1}
  Interval lambda1;
  bool witness = false;
  Rect witness_cell;
  Interval witness_range;
  bool positive = false;
};
PositivityResult positivity_from(const Interval& min_u, std::optional<std::pair<Interval, Rect>> witness,
                                 const Interval& r2, RationalExp p, const Interval& lambda1);
PositivityResult positivity_check(const PowerIntegrator& in, const Interval& r2, RationalExp p,
                                  const Interval& lambda1);

Interval amplitude_enclosure(const Interval& max_u, const Interval& r2);
Interval amplitude_enclosure(const PowerIntegrator& in, const Interval& r2);

struct ProofCertificate {
  std::string status = "incomplete";  // "valid" or "failed: <stage>"
  std::string message;
  RationalExp p{3, 2};
  std::optional<Interval> residual, delta, K, c, r1, r2, amplitude;
  std::optional<AlphaSearch> alpha;
  std::optional<PositivityResult> positivity;
  std::optional<KBound> kbound;
  std::vector<Interval> eigenvalues;  // lowest few enclosures
  Interval C2, C4, c_n;
  std::map<std::string, std::string> config;  // echo, part of the body
  std::map<std::string, std::string> meta;    // timestamps and run statistics
  bool valid() const { return status == "valid"; }
};

// Re-verifies the stored intervals and sets the status. A certificate that
// already failed keeps its status.
void finalize_certificate(ProofCertificate& cert);

// Intervals are written as ["lo", "hi"] with 17 significant digits; parsing
// each string with outward rounding recovers an enclosure.
std::string certificate_body_json(const ProofCertificate& cert);
std::string certificate_to_json(const ProofCertificate& cert);
// Recomputes both existence inequalities (and the positivity comparison) from
// a serialized certificate.
bool recheck_certificate(const std::string& json_text);

}  // namespace semilin
