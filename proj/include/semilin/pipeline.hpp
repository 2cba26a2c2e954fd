#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "semilin/certify.hpp"

namespace semilin {

struct RunConfig {
  RationalExp p{3, 2};
  int modes = 60;    // N_u
  int eig_dim = 14;  // N
  int grid = 16;
  int psa_degree = 12;
  double rel_tol = 1e-11;
  int max_depth = 12;
  HolderTriple holder;
  LinfChoice linf;
  std::optional<double> tail_threshold = 2.0;
  int workers = 0;
  std::string coeffs_in, coeffs_out, out;
};

// Throws UsageError on an invalid configuration.
void validate(const RunConfig& cfg);
// Applies keys of a JSON object ("p", "modes", "eig-dim", "grid", "psa-degree",
// "rel-tol", "max-depth", "holder", "linf", "tail-threshold", "workers",
// "coeffs-in", "coeffs-out", "out") on top of cfg.
void apply_config_json(RunConfig& cfg, const std::string& text);
std::map<std::string, std::string> config_echo(const RunConfig& cfg);

// galerkin -> quadrature -> residual -> inverse-bound -> existence-test ->
// linf-bound -> positivity. A stage failure yields status "failed: <stage>".
// Writes the certificate to cfg.out when set. Progress lines go to log.
ProofCertificate run_verify(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace semilin
