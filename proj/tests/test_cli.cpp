#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "semilin/certify.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

std::string cli() {
  const char* p = std::getenv("SEMILIN_CLI");
  REQUIRE(p != nullptr);
  return p;
}

Run run(const std::string& args) {
  std::string cmd = cli() + " " + args + " 2>/tmp/semilin_cli_err.txt";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string body_of(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  j.erase("meta");
  return j.dump();
}

}  // namespace

TEST_CASE("constants") {
  auto r = run("constants --p 4");
  CHECK(r.code == 0);
  double lo = 0, hi = 0;
  auto pos = r.out.find("C4");
  REQUIRE(pos != std::string::npos);
  REQUIRE(std::sscanf(r.out.c_str() + pos, "C4 [%lf, %lf]", &lo, &hi) == 2);
  CHECK(hi <= 0.318309887);
  CHECK(lo <= 1 / M_PI);
  CHECK(r.out.find("C_N(14)") != std::string::npos);
  CHECK(run("constants --p 3").out.find("C_3") != std::string::npos);
}

TEST_CASE("psa self test") {
  auto r = run("psa-selftest");
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 4);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("plot data") {
  auto r = run("plot-data --grid 64 --modes 9 --r2 0.5");
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 65 * 65 + 1);
  CHECK(r.out.rfind("x,y,u,lower,upper\n", 0) == 0);
  CHECK(r.out.find("\n0.500000,0.500000,") != std::string::npos);
}

TEST_CASE("usage errors exit with 64") {
  CHECK(run("").code == 64);
  CHECK(run("verify --bogus").code == 64);
  CHECK(run("verify --grid 12").code == 64);
  CHECK(run("verify --p 5/2").code == 64);
  CHECK(run("verify --holder 4,4,3").code == 64);
  CHECK(run("verify --config /nonexistent/cfg.json").code == 64);
  CHECK(run("verify --help").code == 0);
}

TEST_CASE("verify: exit code follows the certificate status") {
  auto bad = run("verify --modes 4 --out /tmp/semilin_cli_tiny.json");
  CHECK(bad.code == 2);
  auto tiny = nlohmann::json::parse(slurp("/tmp/semilin_cli_tiny.json"));
  CHECK(tiny["status"] == "failed: existence-test");
  CHECK(slurp("/tmp/semilin_cli_err.txt").find("failed: existence-test") != std::string::npos);

  auto ok = run("verify --modes 20 --eig-dim 9 --workers 1 --coeffs-out /tmp/semilin_cli_u.json");
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["status"] == "valid");
  CHECK(semilin::recheck_certificate(ok.out));

  // same coefficients read back, another worker count: same body
  auto again = run("verify --coeffs-in /tmp/semilin_cli_u.json --eig-dim 9 --workers 2");
  CHECK(again.code == 0);
  auto a = nlohmann::json::parse(ok.out), b = nlohmann::json::parse(again.out);
  a["config"].erase("coeffs-in");
  b["config"].erase("coeffs-in");
  a["config"]["modes"] = b["config"]["modes"];
  CHECK(body_of(a.dump()) == body_of(b.dump()));
}

TEST_CASE("config file and flag precedence") {
  {
    std::ofstream f("/tmp/semilin_cli_cfg.json");
    f << R"({"modes": 4, "eig-dim": 5, "p": "7/4"})";
  }
  auto r = run("verify --config /tmp/semilin_cli_cfg.json --modes 6 --out /tmp/semilin_cli_cfg_out.json");
  CHECK((r.code == 0 || r.code == 2));
  auto j = nlohmann::json::parse(slurp("/tmp/semilin_cli_cfg_out.json"));
  CHECK(j["config"]["modes"] == "6");
  CHECK(j["config"]["eig-dim"] == "5");
  CHECK(j["config"]["p"] == "7/4");
  CHECK(j["config"]["grid"] == "16");
}

TEST_CASE("near-Lipschitz exponent") {
  auto r = run("verify --p 1.999999 --modes 4");
  CHECK((r.code == 0 || r.code == 2));
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["p"] == "1999999/1000000");
  CHECK(j["config"]["holder"] == "4,4,2");
}
