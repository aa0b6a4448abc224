#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace smoothck {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
///
/// The key is (seed, stream); the counter enumerates 256-bit output blocks.
/// Distinct streams of one seed are statistically independent, so trajectory
/// `i` of an ensemble can be generated from `Philox(seed, i)` on any thread.
/// Satisfies UniformRandomBitGenerator.
class Philox {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0) : key_{seed, stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ == 4) {
      buffer_ = bijection(counter_, key_);
      increment(counter_);
      used_ = 0;
    }
    return buffer_[used_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as the argument of log().
  double uniform_positive() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x < limit) return x % n;
    }
  }

  /// The keyed 10-round Philox permutation of one counter block.
  static Block bijection(Block ctr, Key key) {
    constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const Wide p0 = static_cast<Wide>(kMul0) * ctr[0];
      const Wide p1 = static_cast<Wide>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
      const auto lo0 = static_cast<std::uint64_t>(p0);
      const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
      const auto lo1 = static_cast<std::uint64_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  __extension__ using Wide = unsigned __int128;

  static void increment(Block& c) {
    for (auto& word : c) {
      if (++word != 0) break;
    }
  }

  Key key_;
  Block counter_{};
  Block buffer_{};
  int used_ = 4;
};

/// Mixes a seed with up to two tags into an unrelated 64-bit seed (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ (b * 0xD6E8FEB86659FD93ULL));
}

}  // namespace smoothck
