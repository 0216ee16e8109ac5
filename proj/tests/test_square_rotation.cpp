#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rotset/square_rotation.hpp"

using namespace rotset;

namespace {

bool inside_square(const Vec& p) { return std::abs(p[0]) <= 0.5 + 1e-12 && std::abs(p[1]) <= 0.5 + 1e-12; }

}  // namespace

TEST(Diamond, RotationNumberIsQuarterRootTwo) {
  const auto cfg = BilliardConfig::square(0.2);
  const double T = 25 * diamond_period();
  const auto ccw = simulate(cfg, diamond_orbit_start(true), T);
  const auto cw = simulate(cfg, diamond_orbit_start(false), T);
  EXPECT_NEAR(winding_rotation(ccw, cfg), std::sqrt(2.0) / 4, 1e-9);
  EXPECT_NEAR(winding_rotation(cw, cfg), -std::sqrt(2.0) / 4, 1e-9);
  EXPECT_NEAR(winding_displacement(ccw, cfg), 25.0, 1e-9);
  EXPECT_NEAR(diamond_period(), 2 * std::sqrt(2.0), 1e-15);
}

TEST(PolylineWinding, MatchesDenseSampling) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const Vec z{0.01, -0.02};
  for (int it = 0; it < 50; ++it) {
    std::vector<Vec> pts;
    while (pts.size() < 30) {
      const Vec p{u(rng), u(rng)};
      if (norm(p - z) < 0.25) continue;
      // Keep every chord away from z as a folded billiard segment would.
      if (!pts.empty() && oracle::segment_distance({z[0], z[1]}, {pts.back()[0], pts.back()[1]}, {p[0], p[1]}) < 0.2)
        continue;
      pts.push_back(p);
    }
    EXPECT_NEAR(polyline_winding(pts, z), oracle::sampled_winding(pts, z), 1e-9);
  }
}

TEST(PolylineWinding, ReversalNegatesExactly) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int it = 0; it < 100; ++it) {
    std::vector<Vec> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(Vec{u(rng), u(rng)});
    std::vector<Vec> rev(pts.rbegin(), pts.rend());
    EXPECT_EQ(polyline_winding(rev, Vec{0.001, 0.002}), -polyline_winding(pts, Vec{0.001, 0.002}));
  }
}

TEST(Winding, ReferenceMustBeInsideObstacle) {
  const auto cfg = BilliardConfig::square(0.2);
  const auto rec = simulate(cfg, diamond_orbit_start(), 5.0);
  EXPECT_NO_THROW(winding_displacement(rec, cfg, Vec{0.1, 0.1}));
  EXPECT_THROW(winding_displacement(rec, cfg, Vec{0.2, 0.0}), Error);
  EXPECT_THROW(winding_displacement(rec, BilliardConfig::torus(2, 0.2)), Error);
}

TEST(Winding, LongRunsForgetTheReferencePoint) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const auto cfg = BilliardConfig::square(0.15);
  for (int it = 0; it < 5; ++it) {
    Vec x{u(rng), u(rng)};
    if (norm(x) < 0.2) continue;
    const double a = u(rng) * 2 * M_PI;
    const auto rec = simulate(cfg, make_state(cfg, x, Vec{std::cos(a), std::sin(a)}), 200.0);
    const double w0 = winding_displacement(rec, cfg);
    const double w1 = winding_displacement(rec, cfg, Vec{0.1, -0.08});
    EXPECT_LT(std::abs(w0 - w1), 1.0);
  }
}

TEST(FoldPolyline, StaysInSquareAndSplitsAtWalls) {
  const auto f = fold_polyline({Vec{0.0, 0.0}, Vec{1.0, 0.2}});
  for (const auto& p : f) EXPECT_TRUE(inside_square(p));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_NEAR(f[1][0], 0.5, 1e-15);
  EXPECT_NEAR(f[1][1], 0.1, 1e-15);
  EXPECT_NEAR(f[2][0], 0.0, 1e-15);
}

TEST(SquareOrbits, ClosedOrbitsWindAnIntegerNumberOfTimes) {
  const auto cfg = BilliardConfig::square(0.2);
  const auto g = SquareGraph::build(cfg);
  for (const auto& loop : enumerate_loops(g, 2, 200)) {
    const auto o = solve_periodic_orbit(loop, cfg);
    const double w = orbit_rotation_number(o, cfg) * o.length;
    EXPECT_NEAR(w, std::round(w), 1e-9);
    EXPECT_NEAR(orbit_rotation_number(o, cfg, Vec{0.05, 0.12}), orbit_rotation_number(o, cfg), 1e-12);
  }
}

TEST(LongDiagonal, RotationNumbersIncrease) {
  const auto cfg = BilliardConfig::square(0.05);
  const auto g = SquareGraph::build(cfg);
  double prev = 0;
  for (int n = 1; n <= 3; ++n) {
    const auto loop = long_diagonal_loop(n, g);
    EXPECT_EQ(loop.steps.front(), (LatticeIndex{2 * n + 1, 2 * n}));
    const auto o = solve_periodic_orbit(loop, cfg);
    const double rho = orbit_rotation_number(o, cfg);
    EXPECT_GT(std::abs(rho), prev);
    EXPECT_LT(std::abs(rho), std::sqrt(2.0) / 4);
    prev = std::abs(rho);
  }
}

TEST(LongDiagonal, Errors) {
  const auto g = SquareGraph::build(BilliardConfig::square(0.2));
  try {
    long_diagonal_loop(3, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("obstacle too large"), std::string::npos);
  }
  EXPECT_THROW(long_diagonal_loop(-1, g), Error);
}

TEST(SquareInterval, SymmetricAndBelowDiamond) {
  const auto g = SquareGraph::build(BilliardConfig::square(0.2));
  const auto s = square_ar_interval(g, 2, 100000);
  EXPECT_TRUE(s.failures.empty());
  EXPECT_EQ(s.lo, -s.hi);
  EXPECT_EQ(s.v, s.hi);
  EXPECT_GT(s.v, 0.0);
  EXPECT_LT(s.v, std::sqrt(2.0) / 4);
  for (const auto& l : s.loops) EXPECT_LE(std::abs(l.rotation_number), s.v);
}

TEST(SquareInterval, WidensAsTheObstacleShrinks) {
  double prev = 0;
  for (const double r : {0.2, 0.1, 0.05}) {
    const auto s = square_ar_interval(SquareGraph::build(BilliardConfig::square(r)), 2, 100000);
    EXPECT_GT(s.v, prev) << r;
    EXPECT_LT(s.v, std::sqrt(2.0) / 4);
    prev = s.v;
  }
}
