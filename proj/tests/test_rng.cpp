#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "gazeclf/rng.hpp"

using namespace gazeclf;

TEST(SplitMix64, FirstOutputFromZeroMatchesPublishedValue) {
    std::uint64_t state = 0;
    EXPECT_EQ(splitmix64_next(state), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(splitmix64_next(state), 0x6E789E6AA1B965F4ULL);
}

// Straight transcription of the published xoshiro256** step.
TEST(Xoshiro, MatchesReferenceStep) {
    std::uint64_t sm = 42;
    std::uint64_t s[4];
    for (auto& w : s) w = splitmix64_next(sm);
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    Xoshiro256ss rng(42);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t expected = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        ASSERT_EQ(rng(), expected) << "draw " << i;
    }
}

TEST(Xoshiro, SameSeedSameStream) {
    Xoshiro256ss a(7), b(7), c(8);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a();
        EXPECT_EQ(va, b());
        differs |= va != c();
    }
    EXPECT_TRUE(differs);
}

TEST(Xoshiro, UniformStaysInHalfOpenInterval) {
    Xoshiro256ss rng(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Xoshiro, UniformIntCoversInclusiveRange) {
    Xoshiro256ss rng(3);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = rng.uniform_int(-3, 3);
        ASSERT_GE(v, -3);
        ASSERT_LE(v, 3);
        ++hits[static_cast<std::size_t>(v + 3)];
    }
    for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Xoshiro, NormalHasUnitMoments) {
    Xoshiro256ss rng(11);
    double s = 0.0, ss = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        ss += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(ss / n, 1.0, 0.02);
}

TEST(Xoshiro, ShuffleIsAPermutation) {
    Xoshiro256ss rng(5);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    rng.shuffle(std::span<int>(w));
    EXPECT_NE(v, w);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(v, w);
}

TEST(MixSeed, DistinctStreamsGiveDistinctSeeds) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix_seed(1, i));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
    EXPECT_EQ(mix_seed(9, 4), mix_seed(9, 4));
}
