// Counter-based pseudo-random stream.  Every draw is a pure function of
// (seed, shard, sample, counter), so sampling is embarrassingly parallel and
// bit-reproducible for a given shard count regardless of scheduling.
#pragma once

#include <cmath>
#include <cstdint>

namespace plateau {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

class CounterRng {
 public:
  static CounterRng keyed(std::uint64_t seed, std::uint64_t shard, std::uint64_t sample) {
    CounterRng r;
    std::uint64_t k = detail::mix64(seed + 0x9E3779B97F4A7C15ull);
    k = detail::mix64(k ^ (shard + 0xD1B54A32D192ED03ull));
    k = detail::mix64(k ^ (sample + 0x8CB92BA72F3D8DD7ull));
    r.key_ = k;
    return r;
  }

  std::uint64_t next_u64() {
    return detail::mix64(key_ + (++ctr_) * 0x9E3779B97F4A7C15ull);
  }

  // uniform in (0, 1)
  double next_unit() {
    return (double(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  // uniform integer in [0, n)
  std::uint32_t next_below(std::uint32_t n) {
    return std::uint32_t((__uint128_t(next_u64()) * n) >> 64);
  }

  // geometric length: P(N = n) = p^n (1 - p), n >= 0, for p in [0, 1)
  std::uint64_t next_geometric(double p) {
    if (p <= 0.0) return 0;
    double u = next_unit();
    double n = std::log(u) / std::log(p);
    return n < 0.0 ? 0 : std::uint64_t(n);
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

}  // namespace plateau
