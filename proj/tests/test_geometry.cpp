#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rotset/geometry.hpp"

using namespace rotset;

TEST(SmallVec, ArithmeticAndOrdering) {
  const Vec a{1.0, 2.0};
  const Vec b{0.5, -1.0};
  EXPECT_EQ(a + b, (Vec{1.5, 1.0}));
  EXPECT_EQ(a - b, (Vec{0.5, 3.0}));
  EXPECT_EQ(a * 2.0, (Vec{2.0, 4.0}));
  EXPECT_DOUBLE_EQ(dot(a, b), -1.5);
  EXPECT_TRUE((LatticeIndex{0, 1} < LatticeIndex{1, -5}));
  EXPECT_TRUE(is_zero(LatticeIndex(3)));
  EXPECT_THROW(Vec(kMaxDim + 1), Error);
}

TEST(SmallVec, NormalizedRejectsZero) {
  EXPECT_THROW(normalized(Vec::zero(2)), Error);
  EXPECT_NEAR(norm(normalized(Vec{3.0, 4.0})), 1.0, 1e-15);
}

TEST(PointSegmentDistance, MatchesClampedProjection) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int it = 0; it < 2000; ++it) {
    const Vec p{u(rng), u(rng), u(rng)};
    const Vec a{u(rng), u(rng), u(rng)};
    const Vec b{u(rng), u(rng), u(rng)};
    const double want = oracle::segment_distance({p[0], p[1], p[2]}, {a[0], a[1], a[2]},
                                                 {b[0], b[1], b[2]});
    EXPECT_NEAR(point_segment_distance(p, a, b), want, 1e-12);
  }
}

TEST(PointSegmentDistance, SymmetricInEndpointsExactly) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int it = 0; it < 1000; ++it) {
    const Vec p{u(rng), u(rng)};
    const Vec a{u(rng), u(rng)};
    const Vec b{u(rng), u(rng)};
    EXPECT_EQ(point_segment_distance(p, a, b), point_segment_distance(p, b, a));
  }
}

TEST(PointSegmentDistance, DegenerateSegmentThrows) {
  EXPECT_THROW(point_segment_distance(Vec{0.0, 0.0}, Vec{1.0, 1.0}, Vec{1.0, 1.0}), Error);
}

TEST(Reflection, PreservesNormAndIsInvolution) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int it = 0; it < 500; ++it) {
    const Vec v = normalized(Vec{g(rng), g(rng), g(rng)});
    const Vec n = normalized(Vec{g(rng), g(rng), g(rng)});
    const Vec w = reflect_direction(v, n);
    EXPECT_NEAR(norm(w), 1.0, 1e-14);
    EXPECT_NEAR(dot(w, n), -dot(v, n), 1e-14);
    const Vec back = reflect_direction(w, n);
    EXPECT_NEAR(norm(back - v), 0.0, 1e-14);
  }
}

TEST(RayBall, HitsAtExpectedDistance) {
  const Ball ball{Vec{3.0, 0.0}, 1.0};
  const auto t = ray_ball_intersect({Vec{0.0, 0.0}, Vec{1.0, 0.0}}, ball);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 2.0, 1e-15);
  EXPECT_FALSE(ray_ball_intersect({Vec{0.0, 0.0}, Vec{-1.0, 0.0}}, ball));
  EXPECT_FALSE(ray_ball_intersect({Vec{0.0, 2.0}, Vec{1.0, 0.0}}, ball));
  EXPECT_THROW(ray_ball_intersect({Vec{3.0, 0.5}, Vec{1.0, 0.0}}, ball), Error);
}

TEST(AngleBetween, AccurateForTinyAngles) {
  const double eps = 1e-12;
  EXPECT_NEAR(angle_between(Vec{1.0, 0.0}, Vec{std::cos(eps), std::sin(eps)}), eps, 1e-20);
  EXPECT_NEAR(angle_between(Vec{1.0, 0.0}, Vec{-1.0, 0.0}), M_PI, 1e-15);
}

TEST(AnyOrthogonal, IsUnitAndOrthogonal) {
  for (const Vec u : {Vec{1.0, 0.0, 0.0}, Vec{0.3, -2.0, 1.0}, Vec{0.0, 0.0, 5.0}}) {
    const Vec w = any_orthogonal(u);
    EXPECT_NEAR(norm(w), 1.0, 1e-14);
    EXPECT_NEAR(dot(w, u), 0.0, 1e-14);
  }
}
