#include <catch2/catch_amalgamated.hpp>

#include "plateau/lace.hpp"

using namespace plateau;

TEST_CASE("beta = 0 collapses to SRW: lambda = 1, mu = z, Pi = E = f = 0") {
  // z Omega = 0.2 with nmax 16 keeps the series truncation below 1e-10
  auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(2, 0.0, 16));
  auto sol = lace::decompose(s, 0.05);
  REQUIRE(std::abs(sol.lm.lambda - 1.0) < 1e-10);
  REQUIRE(std::abs(sol.lm.mu - 0.05) < 1e-11);
  REQUIRE(sol.pi_abs_sum < 1e-10);
  REQUIRE(sol.f_sup_weighted < 1e-10);
  REQUIRE(sol.e_moment0 < 1e-10);
  REQUIRE(sol.e_moment2 < 1e-10);
  REQUIRE(sol.gf_delta_residual < 1e-10);
}

TEST_CASE("solve_lambda_mu reproduces the closed form") {
  // beta = 0 inputs: Pi = 0, chi = 1/(1 - z Omega)
  auto lm = lace::solve_lambda_mu(0.0, 0.0, 1.0 / (1.0 - 0.6), 0.15, 2);
  REQUIRE(lm.lambda == Catch::Approx(1.0));
  REQUIRE(lm.mu == Catch::Approx(0.15));
  REQUIRE(lm.mu_in_range);
  REQUIRE_THROWS_AS(lace::solve_lambda_mu(0.0, 0.0, 0.0, 0.1, 2), std::invalid_argument);
}

TEST_CASE("E moments cancel by construction across a (z, beta) grid") {
  for (double beta : {0.2, 0.6}) {
    auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(2, beta, 13));
    for (double zo : {0.3, 0.5, 0.7}) {
      auto sol = lace::decompose(s, zo / 4.0);
      double scale = std::max({1.0, std::abs(sol.pi_hat0), sol.lm.mu_omega});
      INFO("beta=" << beta << " zO=" << zo);
      REQUIRE(sol.e_moment0 <= 1e-10 * scale);
      REQUIRE(sol.e_moment2 <= 1e-10 * scale);
    }
  }
}

TEST_CASE("rebuilt G*F = delta and the two f assemblies agree at small z") {
  auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(2, 0.5, 14));
  auto sol = lace::decompose(s, 0.125);  // z Omega = 0.5
  REQUIRE(sol.gf_delta_residual <= 1e-8);
  REQUIRE(sol.f_route_residual <= 1e-8);
  REQUIRE(std::abs(sol.chi_gap) < 1e-6);
}

TEST_CASE("pi decays faster than |x|^{-(d-2)}") {
  auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(3, 0.3, 10));
  auto pr = lace::pi_from_g(s, 0.4 / 6.0);
  double slope = lace::pi_decay_slope(pr);
  REQUIRE(slope <= -1.0);  // -(d-2) for d = 3
}

TEST_CASE("pi_from_g guards") {
  auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(2, 0.4, 10));
  REQUIRE_THROWS_AS(lace::pi_from_g(s, 0.4), std::invalid_argument);  // z >= zc_hat
  auto st = wsaw::enumerate_two_point(wsaw::WsawParams::torus(2, 4, 0.4, 8));
  REQUIRE_THROWS_AS(lace::pi_from_g(st, 0.05), std::invalid_argument);
}

TEST_CASE("truncation sensitivity is reported and small at small z") {
  auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(2, 0.5, 14));
  auto pr = lace::pi_from_g(s, 0.08);  // z Omega = 0.32
  REQUIRE(pr.trunc_sensitivity > 0.0);
  REQUIRE(pr.trunc_sensitivity < 1e-4);
  REQUIRE(pr.ghat_min > 0.1);
}

TEST_CASE("tilt guard and tilted functionals") {
  auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(2, 0.4, 12));
  double z = 0.35 / 4.0;
  DecayFit mf = wsaw::mass_estimate(s, z, 2, 6);
  REQUIRE_THROWS_AS(lace::decompose(s, z, 0.9 * mf.rate), std::invalid_argument);
  auto sol0 = lace::decompose(s, z, 0.0);
  auto solm = lace::decompose(s, z, 0.3 * mf.rate);
  REQUIRE(solm.f_sup_weighted >= sol0.f_sup_weighted);
  REQUIRE(solm.c_sup_weighted >= sol0.c_sup_weighted);
}

TEST_CASE("mass identity: exact algebra at beta = 0, d = 1") {
  for (double zo : {0.2, 0.5, 0.8}) {
    double z = zo / 2.0;
    double m0 = srw::mass_m0(1, z);
    double rhs = lace::mass_identity_rhs(nullptr, z, m0);
    REQUIRE(rhs == Catch::Approx(1.0 - zo).epsilon(1e-12));  // both sides 1 - z Omega
  }
}

TEST_CASE("mass identity scan reports per-z residuals and asymptote fits") {
  auto s = wsaw::enumerate_two_point(wsaw::WsawParams::zd(2, 0.3, 14));
  auto zc = wsaw::zc_estimate(s);
  std::vector<double> zs;
  for (double f : {0.45, 0.55, 0.65}) zs.push_back(f * zc.value);
  auto rep = lace::mass_identity_check(s, zs, 1, 6);
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    REQUIRE(std::isfinite(row.rel_residual));
    REQUIRE(row.rel_residual < 0.2);
    REQUIRE(row.lhs > 0.0);
    REQUIRE(row.rhs > 0.0);
  }
  REQUIRE(rep.c_sq_estimate > 0.0);
  REQUIRE(rep.a_estimate > 0.0);
}
