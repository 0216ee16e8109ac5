#pragma once
/**
 * @file obstacle_lattice.hpp
 * @brief The periodic obstacle configurations and the betweenness predicate.
 *
 * Two geometries are supported, both with a single ball obstacle of radius r:
 *
 *   - TorusLift:    the billiard on R^m / Z^m lifted to R^m. Obstacle O_k is
 *                   the ball of radius r centered at the lattice point k.
 *   - SquareUnfold: the billiard in S = [-1/2, 1/2]^2 unfolded by repeated
 *                   wall reflections. O_k is the obstacle of S carried to the
 *                   cell S + k, mirrored in x when k_x is odd and in y when
 *                   k_y is odd.
 *
 * O_k is "between" O_i and O_j when it meets the convex hull of O_i and O_j.
 * All obstacles are balls of the same radius, so that hull is the radius-r
 * capsule around the center segment and the test reduces to a point-segment
 * distance against 2r. Tangency (distance exactly 2r) counts as between.
 */

#include <numbers>
#include <vector>

#include "rotset/geometry.hpp"

namespace rotset {

/// r must stay below this for the obstacle to be "small".
inline constexpr double kSmallRadius = std::numbers::sqrt2 / 4.0;

enum class GeometryKind { kTorusLift, kSquareUnfold };

struct BilliardConfig {
  int dim = 2;
  double radius = 0.2;
  Vec center = Vec::zero(2);  ///< square only; torus obstacles sit on the lattice
  GeometryKind geometry = GeometryKind::kTorusLift;

  static BilliardConfig torus(int dim, double radius);
  static BilliardConfig square(double radius, Vec center = Vec::zero(2));

  bool is_torus() const noexcept { return geometry == GeometryKind::kTorusLift; }
  bool is_square() const noexcept { return geometry == GeometryKind::kSquareUnfold; }

  /// Throws Error(kConfig) with a precise message when the config is unusable.
  void validate() const;
};

/// Componentwise parity, in Q = {0,1}^2.
using ParityClass = LatticeIndex;

Vec obstacle_center(const LatticeIndex& k, const BilliardConfig& cfg);
Ball obstacle(const LatticeIndex& k, const BilliardConfig& cfg);

/// Parity class of k (square geometry, m = 2).
ParityClass zeta(const LatticeIndex& k);

/// Whether O_k meets the convex hull of O_i and O_j (i == j allowed: hull is O_i).
bool is_between(const LatticeIndex& k, const LatticeIndex& i, const LatticeIndex& j,
                const BilliardConfig& cfg);

/// Every lattice point whose distance to the center segment [c_i, c_j] is at
/// most 2r + 1, excluding i and j. Superset of all k with is_between(k, i, j).
std::vector<LatticeIndex> candidate_blockers(const LatticeIndex& i, const LatticeIndex& j,
                                             const BilliardConfig& cfg);

/// True when no obstacle lies between O_i and O_j.
bool is_unobstructed(const LatticeIndex& i, const LatticeIndex& j, const BilliardConfig& cfg);

}  // namespace rotset
