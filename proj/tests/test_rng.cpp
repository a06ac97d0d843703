#include <catch2/catch_amalgamated.hpp>

#include "plateau/rng.hpp"

using namespace plateau;

TEST_CASE("keyed streams are deterministic and distinct") {
  CounterRng a = CounterRng::keyed(42, 3, 1000);
  CounterRng b = CounterRng::keyed(42, 3, 1000);
  CounterRng c = CounterRng::keyed(42, 4, 1000);
  CounterRng d = CounterRng::keyed(43, 3, 1000);
  bool all_same = true, any_c = false, any_d = false;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t va = a.next_u64();
    if (va != b.next_u64()) all_same = false;
    if (va != c.next_u64()) any_c = true;
    if (va != d.next_u64()) any_d = true;
  }
  REQUIRE(all_same);
  REQUIRE(any_c);
  REQUIRE(any_d);
}

TEST_CASE("unit draws are in (0,1) with sane mean") {
  CounterRng r = CounterRng::keyed(7, 0, 0);
  double s = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = r.next_unit();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  // 4 sigma of a uniform mean
  REQUIRE(std::abs(s / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("bounded draws stay in range and are roughly uniform") {
  CounterRng r = CounterRng::keyed(9, 2, 5);
  int counts[6] = {0, 0, 0, 0, 0, 0};
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    auto v = r.next_below(6);
    REQUIRE(v < 6);
    ++counts[v];
  }
  for (int c : counts) REQUIRE(std::abs(c - n / 6) < 5 * std::sqrt(double(n) / 6));
}

TEST_CASE("geometric draws have the right mean") {
  CounterRng r = CounterRng::keyed(1, 1, 1);
  const double p = 0.6;
  double s = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) s += double(r.next_geometric(p));
  double mean = p / (1.0 - p);             // E N = p/(1-p)
  double var = p / ((1 - p) * (1 - p));    // Var N = p/(1-p)^2
  REQUIRE(std::abs(s / n - mean) < 4.0 * std::sqrt(var / n));
  REQUIRE(r.next_geometric(0.0) == 0);
}
