#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace causalid;
using namespace fixtures;

namespace {

Admg collider() { return Admg::build({"X", "W", "Y"}, {{"X", "W"}, {"Y", "W"}}, {}); }

}  // namespace

TEST(Dsep, Collider) {
  EXPECT_TRUE(d_separated(collider(), {"X"}, {"Y"}, {}));
  EXPECT_FALSE(d_separated(collider(), {"X"}, {"Y"}, {"W"}));
  EXPECT_TRUE(d_separated_oracle(collider(), {"X"}, {"Y"}, {}));
  EXPECT_FALSE(d_separated_oracle(collider(), {"X"}, {"Y"}, {"W"}));
}

TEST(Dsep, ColliderOpenedByDescendant) {
  auto g = Admg::build({"X", "W", "Y", "D"}, {{"X", "W"}, {"Y", "W"}, {"W", "D"}}, {});
  EXPECT_FALSE(d_separated(g, {"X"}, {"Y"}, {"D"}));
}

TEST(Dsep, BidirectedEdgeIsActive) {
  auto g = Admg::build({"X", "Y"}, {}, {{"X", "Y"}});
  EXPECT_FALSE(d_separated(g, {"X"}, {"Y"}, {}));
}

TEST(Dsep, BackdoorPairGraph) {
  EXPECT_TRUE(d_separated(backdoor_left(), {"Y"}, {"Z"}, {"X", "V"}));
  EXPECT_FALSE(d_separated(backdoor_left(), {"Y"}, {"Z"}, {"X"}));
}

TEST(Dsep, RejectsBadSets) {
  EXPECT_THROW(d_separated(chain(), {"X"}, {"X"}, {}), OverlappingSets);
  EXPECT_THROW(d_separated(chain(), {"X"}, {"Q"}, {}), UnknownVariable);
}

TEST(Dsep, OracleAgreesOnEveryTripleOfBackdoorPair) {
  for (const auto& g : {backdoor_left(), backdoor_right()}) {
    const VarMask all = g.all();
    for (VarMask x = 1; x <= all; ++x)
      for (VarMask y = 1; y <= all; ++y) {
        if (x & y) continue;
        const VarMask rest = all & ~(x | y);
        for (VarMask z = rest;; z = (z - 1) & rest) {
          ASSERT_EQ(d_separated(g, x, y, z), d_separated_oracle(g, x, y, z));
          if (!z) break;
        }
      }
  }
}

TEST(DsepProperty, OracleSymmetryMonotonicity) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    auto g = random_admg(2 + t % 6, 0.3, rng);
    auto h = random_subgraph(g, 0.5, rng);
    for (int k = 0; k < 5; ++k) {
      auto [x, y, z] = random_triple(g.size(), rng);
      bool sep = d_separated(g, x, y, z);
      ASSERT_EQ(sep, d_separated_oracle(g, x, y, z));
      ASSERT_EQ(sep, d_separated(g, y, x, z));
      if (sep) {
        ASSERT_TRUE(d_separated(h, x, y, z));
      }
    }
  }
}
