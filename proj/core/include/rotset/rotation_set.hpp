#pragma once
/**
 * @file rotation_set.hpp
 * @brief Estimates and bounds for the admissible rotation set of the torus
 *        billiard.
 *
 * The estimate is the convex hull of rotation vectors of periodic orbits
 * found for enumerated graph loops; its size is measured by the radius of
 * the largest ball about the origin it contains. The closed-form radii
 * below are lower bounds for that radius; the outer bound caps the norm of
 * any admissible rotation vector.
 *
 * Angular density: eta(r) = sum_{n >= 0} asin(r / 2^{n-1}).
 */

#include <optional>
#include <string>
#include <vector>

#include "rotset/convex_hull.hpp"
#include "rotset/orbit_solver.hpp"

namespace rotset {

/// eta(r) to absolute accuracy eps, using the tail bound pi r 2^{1-N}.
double eta(double radius, double eps = 1e-12);
/// Partial sum of the first `terms` terms (smallest terms added first).
double eta_partial(double radius, int terms);
/// Number of terms after which the tail bound drops below eps.
int eta_terms_needed(double radius, double eps);

/// Minimal positive angle between nonzero vectors of Z^dim with norm < N.
/// N in {2, 3}.
double beta(int N, int dim);

/// Largest N in {2, 3} with eta(r) < beta(N, min(m, 2N^2 - 2)) / 2.
std::optional<int> n_of_r(double radius, int dim);

struct AnalyticBounds {
  double eta = 0.0;
  double dimension_radius = 0.0;             ///< sqrt(2 / (ln m + 5))
  double eta_radius = 0.0;                   ///< (1 - sqrt2/2) cos eta
  std::optional<int> n;                      ///< n_of_r
  std::optional<double> lattice_angle_radius;  ///< ((N-1)/(N+1)) cos 2 eta
  double best = 0.0;
};

AnalyticBounds analytic_lower_bounds(const BilliardConfig& cfg);

/// Upper bound a on |w| for admissible rotation vectors w, from the
/// flight-length range [c1, c2] and a minimum turn angle alpha.
struct OuterBound {
  double c1 = 0.0;
  double c2 = 0.0;
  double alpha = 0.0;  ///< sampled estimate, not a certificate
  double a = 1.0;
  int samples = 0;
};

/// alpha is the minimum over edges j -> i and reflection points x on the
/// boundary of O_0 of the angle between the cones of directions O_{-j} -> x
/// and x -> O_i, sampled on a grid of `samples` points per circle and then
/// refined locally.
OuterBound outer_bound(const TorusGraph& g, int samples = 64);

/// a = sqrt(c1^2 + c2^2 + 2 c1 c2 cos alpha) / (c1 + c2).
double outer_ratio(double c1, double c2, double alpha);

/// Short loops realizing every direction of {-1,0,1}^m \ {0}: [k+l, k-l]
/// for unit k (l a unit orthogonal to k), [l, u] for k = l + u otherwise.
std::vector<LoopSpec> unit_direction_loops(const TorusGraph& g);

/// The same closed walk started at its smallest vertex id.
LoopSpec canonical_rotation(const TorusGraph& g, const LoopSpec& loop);
/// -l_q, ..., -l_1.
LoopSpec reversed_loop(const TorusGraph& g, const LoopSpec& loop);

struct RotationPoint {
  Vec w;
  std::size_t loop = 0;   ///< index into RotationSetEstimate::loops
  bool reversed = false;  ///< w is the negation of that loop's vector
};

struct LoopFailure {
  std::size_t loop = 0;
  ErrorCode code = ErrorCode::kSolver;
  std::string message;
};

struct RotationSetEstimate {
  int max_len = 0;
  std::size_t budget = 0;
  bool truncated = false;           ///< enumeration hit the budget
  std::vector<LoopSpec> loops;
  std::vector<double> loop_lengths; ///< orbit length per loop (0 on failure)
  std::vector<double> loop_residuals;
  std::vector<RotationPoint> points;
  ConvexHull hull;
  double inscribed_radius = 0.0;
  AnalyticBounds bounds;
  std::vector<LoopFailure> failures;
};

/// Solves every enumerated loop (plus the unit-direction family), adds
/// the reversal of each vector whose reversed loop is missing, and takes the
/// hull.
RotationSetEstimate estimate_admissible_hull(const TorusGraph& g, int max_len, std::size_t budget,
                                             const OrbitOptions& opts = {});

}  // namespace rotset
