#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rotset/convex_hull.hpp"

using namespace rotset;

TEST(ConvexHull, SquareWithInteriorPoints) {
  const std::vector<Vec> pts{Vec{1.0, 1.0}, Vec{-1.0, 1.0}, Vec{0.0, 0.0}, Vec{-1.0, -1.0},
                             Vec{1.0, -1.0}, Vec{0.5, 0.2}, Vec{1.0, 0.0}};
  const auto h = ConvexHull::build(pts);
  EXPECT_TRUE(h.full_dimensional());
  EXPECT_EQ(h.vertex_ids().size(), 4u);
  EXPECT_NEAR(h.inscribed_radius(), 1.0, 1e-14);
  EXPECT_NEAR(h.margin(Vec{0.5, 0.0}), 0.5, 1e-14);
  EXPECT_LT(h.margin(Vec{1.5, 0.0}), 0.0);
}

TEST(ConvexHull, PlanarInscribedRadiusMatchesSupportLines) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int it = 0; it < 30; ++it) {
    std::vector<Vec> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(Vec{g(rng), g(rng)});
    const auto h = ConvexHull::build(pts);
    EXPECT_NEAR(h.inscribed_radius(), oracle::inscribed_radius_2d(pts), 1e-9);
    for (const auto& p : pts) EXPECT_GE(h.margin(p), -1e-10);
  }
}

TEST(ConvexHull, CounterClockwiseVertices) {
  const std::vector<Vec> pts{Vec{0.0, 0.0}, Vec{2.0, 0.0}, Vec{2.0, 1.0}, Vec{0.0, 1.0}};
  const auto h = ConvexHull::build(pts);
  const auto& ids = h.vertex_ids();
  double area = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Vec& a = pts[ids[i]];
    const Vec& b = pts[ids[(i + 1) % ids.size()]];
    area += a[0] * b[1] - a[1] * b[0];
  }
  EXPECT_NEAR(area / 2, 2.0, 1e-14);
}

TEST(ConvexHull, CubeInSpace) {
  std::vector<Vec> pts;
  for (int x : {-1, 1})
    for (int y : {-1, 1})
      for (int z : {-1, 1}) pts.push_back(Vec{double(x), double(y), double(z)});
  pts.push_back(Vec{0.1, 0.2, 0.3});
  const auto h = ConvexHull::build(pts);
  EXPECT_TRUE(h.full_dimensional());
  EXPECT_EQ(h.vertex_ids().size(), 8u);
  EXPECT_NEAR(h.inscribed_radius(), 1.0, 1e-12);
  EXPECT_NEAR(h.margin(Vec{0.0, 0.0, 0.9}), 0.1, 1e-12);
  EXPECT_NEAR(h.closest_facet(Vec{0.0, 0.0, 0.9}).normal[2], 1.0, 1e-12);
}

TEST(ConvexHull, OctahedronInradius) {
  std::vector<Vec> pts;
  for (int a = 0; a < 3; ++a)
    for (double s : {-1.0, 1.0}) {
      Vec v = Vec::zero(3);
      v[a] = s;
      pts.push_back(v);
    }
  const auto h = ConvexHull::build(pts);
  EXPECT_NEAR(h.inscribed_radius(), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(ConvexHull, DegenerateInput) {
  const auto line = ConvexHull::build({Vec{0.0, 0.0}, Vec{1.0, 1.0}, Vec{2.0, 2.0}});
  EXPECT_FALSE(line.full_dimensional());
  EXPECT_EQ(line.inscribed_radius(), 0.0);
  const auto flat = ConvexHull::build({Vec{0.0, 0.0, 0.0}, Vec{1.0, 0.0, 0.0}, Vec{0.0, 1.0, 0.0},
                                       Vec{1.0, 1.0, 0.0}});
  EXPECT_FALSE(flat.full_dimensional());
}

TEST(ConvexHull, OriginOutside) {
  const auto h = ConvexHull::build({Vec{1.0, 1.0}, Vec{2.0, 1.0}, Vec{1.0, 2.0}});
  EXPECT_EQ(h.inscribed_radius(), 0.0);
}
