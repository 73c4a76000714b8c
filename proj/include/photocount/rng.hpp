#pragma once
#include <cmath>
#include <cstdint>

namespace photocount {

// splitmix64; used both as a generator seeder and as a stream-key mixer so
// that (seed, stream_index) pairs yield decorrelated states.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// xoshiro256** with splitmix64 seeding. One instance per Monte Carlo
/// stream (window or trajectory), so results do not depend on how work is
/// scheduled across threads.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  /// Stream `index` derived from a base seed; used for per-window and
  /// per-trajectory substreams.
  static Rng stream(uint64_t seed, uint64_t index) {
    uint64_t sm = seed;
    (void)splitmix64(sm);
    sm ^= 0xd1b54a32d192ed03ull * (index + 1);
    return Rng(splitmix64(sm));
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential with the given mean; never returns 0.
  double exponential(double mean) {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return -mean * std::log(u);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace photocount
