#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "oracle.hpp"
#include "semilin/galerkin.hpp"

using namespace semilin;

TEST_CASE("sine series identities") {
  auto u = FourierApproximation::single(1, 1, 3.0);
  auto L = laplacian(u);
  CHECK(-L(1, 1) == doctest::Approx(2 * M_PI * M_PI * 3.0).epsilon(1e-15));
  CHECK(l2_norm(u) == doctest::Approx(1.5));
  CHECK(l2_norm_enclosure(u).contains(1.5));
  CHECK(eval(FourierApproximation::single(1, 1, 1.0), 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval(FourierApproximation::single(1, 1, 1.0), Interval(0.5), Interval(0.5)) == Interval(1.0));

  FourierApproximation v(5);
  v.set(1, 1, 2.0);
  v.set(3, 5, -0.7);
  v.set(5, 1, 0.3);
  auto LL = laplacian(laplacian(v));
  for (auto [i, j] : odd_modes(5)) {
    double f = (i * i + j * j) * M_PI * M_PI;
    CHECK(LL(i, j) == doctest::Approx(f * f * v(i, j)).epsilon(1e-14));
  }
  CHECK(v.odd_only());
  v.set(2, 1, 1.0);
  CHECK_FALSE(v.odd_only());
}

TEST_CASE("stiffness diagonal") {
  auto d = stiffness_diag({{1, 1}, {3, 5}});
  CHECK(oracle::inside(d[0], oracle::pi() * oracle::pi() / 2));
  CHECK(oracle::inside(d[1], oracle::pi() * oracle::pi() * 34 / 4));
  CHECK(stiffness_factor(3, 5) == RationalExp(34, 4));
  CHECK(odd_modes(14).size() == 49);
}

TEST_CASE("odd-mode symmetry of evaluation") {
  FourierApproximation u(9);
  oracle::SineSum ref;
  for (auto [i, j] : odd_modes(9)) {
    u.set(i, j, oracle::uniform(-1, 1) / (i * j));
    ref.ix.push_back(i);
    ref.iy.push_back(j);
    ref.a.push_back(u(i, j));
  }
  for (int k = 0; k < 200; ++k) {
    double x = oracle::uniform(0, 1), y = oracle::uniform(0, 1);
    double v = eval(u, x, y);
    CHECK(eval(u, 1 - x, y) == doctest::Approx(v).epsilon(1e-12).scale(1));
    CHECK(eval(u, x, 1 - y) == doctest::Approx(v).epsilon(1e-12).scale(1));
    CHECK(oracle::inside(eval(u, Interval(x), Interval(y)), ref(x, y)));
  }
}

TEST_CASE("coefficient exchange round trip") {
  FourierApproximation u(7);
  for (auto [i, j] : odd_modes(7)) u.set(i, j, oracle::uniform(-100, 100));
  auto dir = std::filesystem::temp_directory_path();
  for (std::string name : {"semilin_coeffs.json", "semilin_coeffs.txt"}) {
    auto path = (dir / name).string();
    save_coefficients(u, path);
    auto v = load_coefficients(path);
    CHECK(v.max_mode() == 7);
    CHECK(v.coeffs() == u.coeffs());
    std::remove(path.c_str());
  }
  CHECK_THROWS_AS(coefficients_from_json("{\"nope\": 1}"), UsageError);
}

TEST_CASE("gauss-legendre rule") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double s = 0, m14 = 0;
  for (int i = 0; i < 8; ++i) {
    s += w[i];
    m14 += w[i] * std::pow(x[i], 14);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m14 == doctest::Approx(2.0 / 15).epsilon(1e-14));
}

TEST_CASE("one-mode caricature") {
  // a (pi^2/2) = a^{3/2} (int_0^1 sin^{5/2}(pi x) dx)^2, Beta-function closed form.
  double s = std::tgamma(1.75) / (std::sqrt(M_PI) * std::tgamma(2.25));
  double oracle_a = std::pow((M_PI * M_PI / 2) / (s * s), 2.0);
  CHECK(one_mode_amplitude(RationalExp(3, 2)) == doctest::Approx(oracle_a).epsilon(1e-10));
  GalerkinConfig cfg;
  cfg.max_mode = 1;
  auto u = newton_solve(cfg);
  CHECK(u(1, 1) == doctest::Approx(oracle_a).epsilon(1e-10));
}

TEST_CASE("Newton solve at moderate size") {
  GalerkinConfig cfg;
  cfg.max_mode = 21;
  auto rep = newton_iterate(cfg);
  CHECK(rep.converged);
  double peak = eval(rep.u, 0.5, 0.5);
  CHECK(peak > 570);
  CHECK(peak < 580);
  CHECK(rep.u.odd_only());
  CHECK(galerkin_residual(rep.u, cfg.p, 16) < 10 * cfg.tolerance + 1e-9);

  GalerkinConfig again = cfg;
  again.initial = rep.u;
  auto rep2 = newton_iterate(again);
  CHECK(rep2.converged);
  CHECK(rep2.iterations <= 1);

  GalerkinConfig bad = cfg;
  bad.max_iterations = 1;
  CHECK_THROWS_AS(newton_solve(bad), SolverError);
}
