#include "uqkd/rng.hpp"

#include <gtest/gtest.h>

#include <set>

#include "stat_oracles.hpp"

using uqkd::PhotonStream;

// Known-answer vectors published with Random123 (kat_vectors, philox4x32_10).
TEST(Philox, KnownAnswers) {
  using Block = std::array<std::uint32_t, 4>;
  EXPECT_EQ(PhotonStream::philox({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(PhotonStream::philox({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(PhotonStream::philox({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(PhotonStreamTest, ReproducibleAndKeyed) {
  PhotonStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
    EXPECT_NE(x, d.uniform());
  }
}

TEST(PhotonStreamTest, UnitIntervalAndUniform) {
  std::vector<double> draws;
  for (std::uint64_t photon = 0; photon < 2000; ++photon) {
    PhotonStream s(1, photon);
    for (int i = 0; i < 50; ++i) {
      const double u = s.uniform();
      ASSERT_GE(u, 0.0);
      ASSERT_LT(u, 1.0);
      const double q = s.uniform_open_low();
      ASSERT_GT(q, 0.0);
      ASSERT_LE(q, 1.0);
      draws.push_back(u);
    }
  }
  EXPECT_GT(uqkd::testing::ks_one_sample_p(draws, [](double x) { return x; }), 0.01);
}
