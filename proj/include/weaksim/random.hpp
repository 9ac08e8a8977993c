#pragma once

#include <cstdint>
#include <bit>

namespace weaksim {

// Seeded generator for all sampling in this library. xoshiro256** core with
// splitmix64 state expansion; the same seed always yields the same stream on
// every platform. Integer ranges are drawn by masked rejection so they are
// exactly uniform (no modulo bias).
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed) : seed_(seed) {
    uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
    // xoshiro must not start from the all-zero state.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9E3779B97F4A7C15ull;
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() {
    const uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, bound); bound >= 1. Draws the minimal number of bits and
  // rejects out-of-range words.
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    const int bits = std::bit_width(bound - 1);
    const int shift = 64 - bits;
    for (;;) {
      const uint64_t x = next_u64() >> shift;
      if (x < bound) return x;
    }
  }

  bool coin() { return next_u64() >> 63; }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Independent child stream; deterministic in (seed, stream). Used to make
  // record-parallel sampling order-independent.
  RandomSource derive(uint64_t stream) const {
    return RandomSource(seed_ ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
  }

 private:
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t s_[4];
  uint64_t seed_;
};

}  // namespace weaksim
