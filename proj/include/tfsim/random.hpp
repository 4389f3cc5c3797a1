#pragma once

#include <array>
#include <cstdint>

namespace tfsim {

// SplitMix64 (Steele, Lea, Flood). Used only to expand a 64-bit seed into
// generator state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman, Vigna). Output is a pure function of the seed
// on every platform, which keeps traces reproducible. Satisfies
// UniformRandomBitGenerator, but callers should use the helpers below rather
// than <random> distributions, whose algorithms vary between standard
// libraries.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) {
      word = sm.next();
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  constexpr double next_double() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi], unbiased (rejection on the top of the range).
  constexpr std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == max()) {
      return (*this)();
    }
    const std::uint64_t range = span + 1;
    // 2^64 mod range; values above bound would bias the low residues.
    const std::uint64_t bound = max() - ((max() - range + 1) % range);
    std::uint64_t x = (*this)();
    while (x > bound) {
      x = (*this)();
    }
    return lo + x % range;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

// Independent sub-stream for a (seed, stream) pair.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 sm(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
  return sm.next();
}

}  // namespace tfsim
