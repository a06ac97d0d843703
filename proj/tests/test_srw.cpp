#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "plateau/srw.hpp"

using namespace plateau;
using srw::GreenParams;

TEST_CASE("series route: mu = 0 leaves only the zero-step walk") {
  auto p = GreenParams::with_mu_omega(2, 0.0, 4, 10, 16);
  auto g = srw::green_series(p);
  REQUIRE(g.at(Point::zero(2)) == 1.0);
  REQUIRE(g.at(Point::of({1, 0})) == 0.0);
}

TEST_CASE("series route matches the d=1 closed form") {
  auto p = GreenParams::with_mu_omega(1, 0.5, 60, 140, 64);
  auto g = srw::green_series(p);
  REQUIRE(g.at(Point::of({0})) == Catch::Approx(1.154701).margin(2e-6));
  REQUIRE(g.at(Point::of({1})) == Catch::Approx(0.309401).margin(2e-6));
  REQUIRE(g.at(Point::of({0})) == Catch::Approx(oracles::green_1d(0.5, 0)).margin(g.series_tail + 1e-12));
  REQUIRE(g.series_tail == Catch::Approx(std::pow(0.5, 141) / 0.5));
  REQUIRE(g.box_loss >= 0.0);
  REQUIRE_THROWS_AS(srw::green_series(GreenParams::with_mu_omega(1, 1.0, 10, 10, 16)),
                    std::invalid_argument);
}

TEST_CASE("fourier route matches the d=1 closed form and the delta limit") {
  auto p = GreenParams::with_mu_omega(1, 0.5, 20, 0, 128);
  auto g = srw::green_fourier(p);
  for (int x = 0; x <= 10; ++x)
    REQUIRE(g.at(Point::of({x})) ==
            Catch::Approx(oracles::green_1d(0.5, x)).margin(1e-12));
  auto p0 = GreenParams::with_mu_omega(3, 0.0, 3, 0, 16);
  auto g0 = srw::green_fourier(p0);
  REQUIRE(g0.at(Point::zero(3)) == Catch::Approx(1.0).margin(1e-13));
  REQUIRE(g0.at(Point::of({1, 1, 0})) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("critical quadrature accepted with a warning") {
  auto p = GreenParams::with_mu_omega(3, 1.0, 6, 0, 32);
  auto g = srw::green_fourier(p);
  REQUIRE(g.critical_warning);
  REQUIRE(std::isinf(g.quad_budget));
  REQUIRE(g.at(Point::zero(3)) > 1.0);
  REQUIRE(std::isfinite(g.at(Point::zero(3))));
}

TEST_CASE("cross-route agreement within budgets, d = 2") {
  auto p = GreenParams::with_mu_omega(2, 0.6, 12, 80, 64);
  auto s = srw::green_series(p);
  auto f = srw::green_fourier(p);
  double budget = s.budget() + f.budget();
  for (std::int64_t i = 0; i < s.table.count(); ++i) {
    const Point& x = s.table.fund_point(i);
    REQUIRE(std::abs(s.at(x) - f.at(x)) <= budget + 1e-13);
  }
}

TEST_CASE("monotone in mu and symmetric") {
  auto lo = srw::green_series(GreenParams::with_mu_omega(2, 0.4, 8, 60, 0));
  auto hi = srw::green_series(GreenParams::with_mu_omega(2, 0.6, 8, 60, 0));
  for (std::int64_t i = 0; i < lo.table.count(); ++i) {
    const Point& x = lo.table.fund_point(i);
    REQUIRE(lo.at(x) <= hi.at(x) + 1e-15);
  }
  // symmetric storage makes invariance structural; spot-check the lookup
  REQUIRE(hi.at(Point::of({2, -1})) == hi.at(Point::of({-1, 2})));
}

TEST_CASE("chi0 consistency: box sums grow to 1/(1 - mu Omega)") {
  double target = srw::chi0(0.7);
  double prev = 0.0;
  for (auto [L, N] : {std::pair{6, 40}, std::pair{12, 80}, std::pair{24, 160}}) {
    auto g = srw::green_series(GreenParams::with_mu_omega(2, 0.7, L, N, 0));
    double s = g.table.sum();
    REQUIRE(s >= prev - 1e-14);
    REQUIRE(s <= target + 1e-10);
    prev = s;
  }
  REQUIRE(prev == Catch::Approx(target).epsilon(1e-4));
}

TEST_CASE("mass m0") {
  REQUIRE(srw::mass_m0(2, 1.0 / 4.0) == 0.0);
  REQUIRE(srw::mass_m0(1, 0.25) == Catch::Approx(std::acosh(2.0)).epsilon(1e-12));
  // cross-check: ln(C(1)/C(0)) = -m0 in d = 1
  double m0 = srw::mass_m0(1, 0.25);
  REQUIRE(std::log(oracles::green_1d(0.5, 1) / oracles::green_1d(0.5, 0)) ==
          Catch::Approx(-m0).epsilon(1e-12));
  // strictly decreasing in mu
  double prev = srw::mass_m0(3, 0.05);
  for (double mu : {0.08, 0.11, 0.14, 1.0 / 6.0}) {
    double cur = srw::mass_m0(3, mu);
    REQUIRE(cur < prev);
    prev = cur;
  }
  REQUIRE_THROWS_AS(srw::mass_m0(2, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(srw::mass_m0(2, -0.1), std::invalid_argument);
}

TEST_CASE("mass asymptotics m0^2 ~ 1/mu - Omega near the critical point") {
  for (double a : {0.999, 0.9999}) {
    int d = 2;
    double mu = a / (2 * d);
    double m0 = srw::mass_m0(d, mu);
    double ratio = m0 * m0 / (1.0 / mu - 2 * d);
    REQUIRE(ratio == Catch::Approx(1.0).margin(0.01));
  }
  // the stable branch for y - 1 < 1e-8 stays finite and positive
  double tiny = srw::mass_m0(2, (1.0 - 1e-12) / 4.0);
  REQUIRE(tiny > 0.0);
  REQUIRE(tiny < 1e-5);
}

TEST_CASE("massive decay fit: rate near m0, power near (d-1)/2") {
  auto p = GreenParams::with_mu_omega(3, 0.9, 32, 260, 0);
  auto rep = srw::fit_massive_decay(p, 0, 8, 24);
  REQUIRE(rep.fit.rate == Catch::Approx(rep.m0).epsilon(0.05));
  REQUIRE(std::abs(rep.fit.power - 1.0) < 0.3);
  REQUIRE(rep.rate_in_band);
  REQUIRE_THROWS_AS(srw::fit_massive_decay(GreenParams::with_mu_omega(2, 0.9, 20, 60, 0), 0, 4,
                                           12),
                    std::invalid_argument);  // d > 2 required
}

TEST_CASE("critical power fit near d - 2") {
  auto p = GreenParams::with_mu_omega(3, 1.0, 12, 0, 96);
  DecayFit f = srw::fit_critical_power(p, 0, 3, 11);
  REQUIRE(std::abs(f.power - 1.0) < 0.2);
}

TEST_CASE("heat kernel bound and parity") {
  auto rep = srw::fit_heat_kernel(2, 22);
  REQUIRE(rep.bound_holds);
  REQUIRE(rep.a > 0.0);
  REQUIRE(rep.A > 0.0);
  // on-diagonal scaled sequence approaches the local CLT constant 2/pi
  REQUIRE(rep.on_diagonal_scaled.back() == Catch::Approx(2.0 / M_PI).margin(0.02));
  for (std::size_t i = 1; i < rep.on_diagonal_scaled.size(); ++i)
    REQUIRE(rep.on_diagonal_scaled[i] < 2.0 / M_PI);

  // D^{*n}(x) = 0 unless n >= ||x||_inf and n = ||x||_1 mod 2
  SymTable cur(2, 6), nxt(2, 6);
  auto nb = cur.neighbour_ids();
  cur.fund(cur.rank(Point::zero(2))) = 1.0;
  for (int n = 1; n <= 6; ++n) {
    for (std::int64_t i = 0; i < cur.count(); ++i) {
      double s = 0;
      for (int j = 0; j < 4; ++j) {
        auto id = nb[std::size_t(i) * 4 + j];
        if (id >= 0) s += cur.fund(id);
      }
      nxt.fund(i) = s / 4.0;
    }
    std::swap(cur.raw(), nxt.raw());
    for (std::int64_t i = 0; i < cur.count(); ++i) {
      const Point& x = cur.fund_point(i);
      if (n < x.norm_sup()) REQUIRE(cur.fund(i) == 0.0);
      if ((n - x.norm_l1()) % 2 != 0) REQUIRE(cur.fund(i) == 0.0);
    }
  }
}

TEST_CASE("infrared check") {
  SECTION("A_hat at zero frequency") {
    std::array<double, kMaxDim> k0{};
    REQUIRE(srw::ahat_tilted(k0, 3, 0.9 / 6.0, 0.0).real() == Catch::Approx(0.1));
    // at m = m0 the tilted transform loses invertibility at k = 0
    double mu = 0.95 / 6.0;
    double m0 = srw::mass_m0(3, mu);
    REQUIRE(std::abs(srw::ahat_tilted(k0, 3, mu, m0)) < 1e-12);
  }
  SECTION("uniform lower bound on the grid") {
    double mu = 0.99 / 6.0;
    double m0 = srw::mass_m0(3, mu);
    auto rep = srw::infrared_check(3, mu, 2.0 / 3.0 * m0, 24, 0.9);
    REQUIRE(rep.c_lower > 0.0);
    for (double c : rep.deriv_constants) REQUIRE(std::isfinite(c));
    REQUIRE(rep.deriv_constants.size() == rep.deriv_labels.size());
  }
  SECTION("m beyond sigma m0 rejected") {
    double mu = 0.9 / 6.0;
    double m0 = srw::mass_m0(3, mu);
    REQUIRE_THROWS_AS(srw::infrared_check(3, mu, 0.95 * m0, 8, 0.9), std::invalid_argument);
    REQUIRE_THROWS_AS(srw::infrared_check(3, 0.05 / 6.0, 0.0, 8, 0.9), std::invalid_argument);
  }
}
