#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rotset/obstacle_lattice.hpp"

using namespace rotset;

TEST(Config, SmallObstacleGate) {
  EXPECT_NO_THROW(BilliardConfig::torus(2, 0.35).validate());
  try {
    BilliardConfig::torus(2, 0.36).validate();
    FAIL() << "radius above sqrt(2)/4 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("small obstacle"), std::string::npos);
  }
  EXPECT_THROW(BilliardConfig::torus(2, 0.0).validate(), Error);
  EXPECT_THROW(BilliardConfig::torus(1, 0.1).validate(), Error);
  // The square obstacle must sit in a ball of radius < sqrt(2)/4 about 0.
  EXPECT_NO_THROW(BilliardConfig::square(0.2, Vec{0.1, 0.05}).validate());
  EXPECT_THROW(BilliardConfig::square(0.3, Vec{0.1, 0.0}).validate(), Error);
}

TEST(ObstacleCenter, SquareMirrorsOddCells) {
  const auto cfg = BilliardConfig::square(0.1, Vec{0.12, -0.07});
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q) {
      const auto want = oracle::square_center({p, q}, 0.12, -0.07);
      const Vec got = obstacle_center(LatticeIndex{p, q}, cfg);
      EXPECT_DOUBLE_EQ(got[0], want[0]);
      EXPECT_DOUBLE_EQ(got[1], want[1]);
    }
}

TEST(Zeta, ParityOfNegativeCells) {
  EXPECT_EQ(zeta(LatticeIndex{-3, 4}), (LatticeIndex{1, 0}));
  EXPECT_EQ(zeta(LatticeIndex{7, -1}), (LatticeIndex{1, 1}));
}

TEST(Between, TangencyCountsAsBetween) {
  // O_(1,0) lies at distance 1/sqrt5 from the segment 0 -> (2,1).
  const double d = 1.0 / std::sqrt(5.0);
  auto cfg = BilliardConfig::torus(2, d / 2.0);
  EXPECT_TRUE(is_between(LatticeIndex{1, 0}, LatticeIndex{0, 0}, LatticeIndex{2, 1}, cfg));
  cfg.radius = d / 2.0 - 1e-9;
  EXPECT_FALSE(is_between(LatticeIndex{1, 0}, LatticeIndex{0, 0}, LatticeIndex{2, 1}, cfg));
}

TEST(Between, SymmetricInEndpoints) {
  const auto cfg = BilliardConfig::torus(3, 0.17);
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      for (int z = -2; z <= 2; ++z) {
        const LatticeIndex k{x, y, z};
        const LatticeIndex j{3, 1, -2};
        if (k == j || is_zero(k)) continue;
        EXPECT_EQ(is_between(k, LatticeIndex(3), j, cfg), is_between(k, j, LatticeIndex(3), cfg));
      }
}

TEST(CandidateBlockers, SupersetOfBetween) {
  for (const double r : {0.05, 0.2, 0.34}) {
    const auto cfg = BilliardConfig::torus(2, r);
    const LatticeIndex i{0, 0};
    for (const LatticeIndex j : {LatticeIndex{5, 2}, LatticeIndex{-3, 7}, LatticeIndex{1, 1}}) {
      const auto cand = candidate_blockers(i, j, cfg);
      for (int x = -10; x <= 10; ++x)
        for (int y = -10; y <= 10; ++y) {
          const LatticeIndex k{x, y};
          if (k == i || k == j) continue;
          if (is_between(k, i, j, cfg))
            EXPECT_NE(std::find(cand.begin(), cand.end(), k), cand.end()) << to_string(k);
        }
    }
  }
}

TEST(Unobstructed, AgreesWithBruteScan) {
  const auto cfg = BilliardConfig::torus(2, 0.12);
  for (int x = -6; x <= 6; ++x)
    for (int y = -6; y <= 6; ++y) {
      if (x == 0 && y == 0) continue;
      bool blocked = false;
      for (int a = -8; a <= 8 && !blocked; ++a)
        for (int b = -8; b <= 8 && !blocked; ++b) {
          if ((a == 0 && b == 0) || (a == x && b == y)) continue;
          blocked = oracle::segment_distance({double(a), double(b)}, {0, 0}, {double(x), double(y)}) <=
                    2 * cfg.radius + 1e-12;
        }
      EXPECT_EQ(is_unobstructed(LatticeIndex{0, 0}, LatticeIndex{x, y}, cfg), !blocked) << x << "," << y;
    }
}
