#include <gtest/gtest.h>

#include <random>

#include "rotset/rotation_set.hpp"
#include "rotset/tracking.hpp"

using namespace rotset;

namespace {

struct Fixture {
  BilliardConfig cfg = BilliardConfig::torus(2, 0.2);
  TorusGraph g = TorusGraph::build(cfg);
  std::vector<PeriodicOrbit> base = make_tracking_base(g, unit_direction_loops(g), LatticeIndex{1, 0});
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST(TrackingBase, SharesTheHubStep) {
  const auto& f = fixture();
  EXPECT_EQ(f.base.size(), 8u);
  for (const auto& p : f.base) {
    EXPECT_EQ(p.type.cells[1] - p.type.cells[0], (LatticeIndex{1, 0}));
    EXPECT_LT(p.residual, 1e-9);
  }
}

TEST(SteeringEps, AxisFamily) {
  const std::vector<Vec> v{Vec{1.0, 0.0}, Vec{-1.0, 0.0}, Vec{0.0, 2.0}, Vec{0.0, -1.0}};
  const double e = steering_eps(v, 4096);
  EXPECT_LE(e, 1.0 - std::sqrt(0.5) + 1e-12);
  EXPECT_GT(e, 1.0 - std::sqrt(0.5) - 2e-3);
  EXPECT_EQ(steering_eps({Vec{1.0, 0.0}, Vec{1.0, 1.0}}, 512), 0.0);
}

TEST(Tracking, RandomInteriorTargets) {
  const auto& f = fixture();
  std::vector<Vec> rot;
  for (const auto& p : f.base) rot.push_back(p.rotation_vector);
  const auto hull = ConvexHull::build(rot);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  int done = 0;
  while (done < 5) {
    const Vec target{u(rng), u(rng)};
    if (hull.margin(target) < 0.05) continue;
    ++done;
    const double T = 300.0;
    const auto run = generate_tracking_path(target, f.base, T, f.cfg);
    EXPECT_GE(run.total_time, T);
    EXPECT_TRUE(run.bound_holds);
    EXPECT_LE(run.deviation_sup, run.declared_M);
    EXPECT_LE(norm(run.empirical_rotation - target), 2.0 * run.declared_M / run.total_time);
    EXPECT_TRUE(is_admissible(run.type, f.cfg));
    EXPECT_EQ(run.points.size(), run.type.cells.size());
  }
}

TEST(Tracking, BoundaryTargetRejected) {
  const auto& f = fixture();
  try {
    generate_tracking_path(f.base.front().rotation_vector, f.base, 100.0, f.cfg);
    FAIL() << "target on the hull boundary accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
    EXPECT_NE(std::string(e.what()).find("not strictly inside"), std::string::npos);
  }
}

TEST(Tracking, MismatchedHubRejected) {
  const auto& f = fixture();
  auto base = f.base;
  base.push_back(make_tracking_base(f.g, {unit_direction_loops(f.g).front()}, LatticeIndex{0, 1}).front());
  EXPECT_THROW(generate_tracking_path(Vec{0.1, 0.1}, base, 50.0, f.cfg), Error);
}
