#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "rbskm/rng.hpp"

using rbskm::RngStream;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswerZero) {
  const auto out = rbskm::philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = rbskm::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = rbskm::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                        {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(RngStream, SameStateSameDraws) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a, b);
}

TEST(RngStream, CounterAdvancesByOne) {
  RngStream a(3);
  a.next_u64();
  a.next_u64();
  EXPECT_EQ(a.counter(), 2u);
}

TEST(RngStream, SplitIsPureAndDistinct) {
  const RngStream base(99);
  EXPECT_EQ(base.split(4), base.split(4));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t id = 0; id < 1000; ++id) seeds.insert(base.split(id).seed());
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_NE(RngStream(1).split(0).seed(), RngStream(2).split(0).seed());
}

TEST(RngStream, UniformBelowInRangeAndRoughlyFlat) {
  RngStream r(5);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto v = r.uniform_below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  // binomial sd is about 91; allow 5 sd
  for (int c : counts) EXPECT_NEAR(c, draws / 7.0, 460.0);
}

TEST(RngStream, UniformAndNormalMoments) {
  RngStream r(11);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sn / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}
