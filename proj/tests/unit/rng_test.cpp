#include <gtest/gtest.h>

#include <cmath>

#include "smoothck/rng.hpp"

namespace smoothck {
namespace {

// Known-answer vectors for Philox4x64-10 (counter, key) -> block.
TEST(Philox, KnownAnswers) {
  using B = Philox::Block;
  EXPECT_EQ(Philox::bijection(B{0, 0, 0, 0}, Philox::Key{0, 0}),
            (B{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
               0x7e68b68aec7ba23bULL}));
  const std::uint64_t ones = ~0ULL;
  EXPECT_EQ(Philox::bijection(B{ones, ones, ones, ones}, Philox::Key{ones, ones}),
            (B{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL,
               0xa09caebf594f0ba0ULL}));
  EXPECT_EQ(Philox::bijection(B{0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
                                0x082efa98ec4e6c89ULL},
                              Philox::Key{0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}),
            (B{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL,
               0x57bd43b5e52b7fe6ULL}));
}

TEST(Philox, StreamStartsAtCounterZero) {
  Philox rng(0, 0);
  EXPECT_EQ(rng(), 0x16554d9eca36314cULL);
  EXPECT_EQ(rng(), 0xdb20fe9d672d0fdcULL);
}

TEST(Philox, DeterministicAndStreamsDiffer) {
  Philox a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
}

TEST(Philox, UniformMoments) {
  Philox rng(9);
  constexpr int n = 200000;
  double sum = 0.0, sq = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    sum += u;
    sq += u * u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    const double p = rng.uniform_positive();
    ASSERT_GT(p, 0.0);
    ASSERT_LE(p, 1.0);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 2e-3);
}

TEST(Philox, BelowIsUnbiasedAndInRange) {
  Philox rng(5);
  std::array<int, 7> counts{};
  constexpr int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 4.0 * std::sqrt(n / 7.0));
}

TEST(DeriveSeed, SeparatesTags) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(2, 2, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 2, 1));
}

}  // namespace
}  // namespace smoothck
