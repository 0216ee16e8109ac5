#pragma once
/**
 * @file orbit_solver.hpp
 * @brief Periodic orbits and trajectory pieces of prescribed type, found by
 *        minimizing broken-line length over products of obstacle boundaries.
 *
 * The minimization is block-coordinate descent: each sub-step moves one
 * reflection point along its sphere to the minimizer of the distance to its
 * two neighbours. That sub-problem lives in the 2-plane through the sphere
 * center containing both neighbours, where it is a 1D problem on an arc
 * (golden-section bracketing, then Newton polish).
 *
 * Periodic closure uses a ghost point x_q = x_0 + (c_q - c_0), which is the
 * translation by p in the torus and by the (even) unfolding shift in the
 * square.
 */

#include <optional>
#include <vector>

#include "rotset/transition_graph.hpp"

namespace rotset {

struct OrbitOptions {
  double tol = 1e-10;          ///< max point movement per sweep at convergence
  long max_iters = 100000;     ///< sweeps
  std::vector<Vec> initial;    ///< optional starting points (projected onto the spheres)
  bool check_clearance = true;
};

/// Statistics of one descent run, shared by both result types.
struct DescentReport {
  long iterations = 0;
  bool monotone = true;         ///< length never increased across a sweep
  double max_increase = 0.0;    ///< largest observed sweep-to-sweep increase
  double final_movement = 0.0;
};

struct PeriodicOrbit {
  AdmissibleType type;         ///< periodic, one period of cells
  std::vector<Vec> points;     ///< q reflection points
  double length = 0.0;         ///< one period
  Vec displacement;            ///< c_q - c_0 (= p)
  Vec rotation_vector;
  double residual = 0.0;       ///< max reflection-law violation (radians)
  double boundary_error = 0.0; ///< max | |x_i - c_i| - r |
  double min_clearance = 0.0;  ///< min distance of a segment to a non-endpoint center
  DescentReport descent;
};

struct ConstrainedPath {
  AdmissibleType type;         ///< finite, s + 1 cells
  std::vector<Vec> points;     ///< x_0 .. x_s, endpoints included
  double length = 0.0;
  Vec displacement;            ///< x_s - x_0
  double residual = 0.0;       ///< interior points only
  double boundary_error = 0.0;
  double min_clearance = 0.0;
  bool endpoint_crossing = false;  ///< first or last segment passes through its own obstacle
  DescentReport descent;
};

PeriodicOrbit solve_periodic_orbit(const LoopSpec& loop, const BilliardConfig& cfg,
                                   const OrbitOptions& opts = {});
/// Same for a periodic AdmissibleType. Square types with an odd shift are
/// solved over the doubled period.
PeriodicOrbit solve_periodic_orbit(const AdmissibleType& type, const BilliardConfig& cfg,
                                   const OrbitOptions& opts = {});

ConstrainedPath solve_constrained_path(const AdmissibleType& type, const Vec& x0, const Vec& xs,
                                       const BilliardConfig& cfg, const OrbitOptions& opts = {});

/// p / length.
Vec orbit_rotation_vector(const PeriodicOrbit& orbit);

/// Max angle between the mirrored incoming and the outgoing direction at
/// point `at` of the broken line prev -> at -> next reflecting on a sphere
/// about `center`.
double reflection_residual(const Vec& prev, const Vec& at, const Vec& next, const Vec& center);

/// Sum of segment lengths of x_0, ..., x_{n-1} (plus the closing segment
/// to `ghost` when given).
double broken_line_length(const std::vector<Vec>& points, const std::optional<Vec>& ghost = {});

}  // namespace rotset
