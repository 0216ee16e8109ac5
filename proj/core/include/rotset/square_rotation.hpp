#pragma once
/**
 * @file square_rotation.hpp
 * @brief Rotation numbers of the square billiard: the winding of a folded
 *        trajectory around a reference point z inside the obstacle.
 *
 * Each straight folded segment avoids the obstacle, so the argument of
 * x - z changes along it by its principal value; the winding displacement
 * is the sum of those increments over 2 pi. No branch tracking is needed.
 */

#include <optional>
#include <vector>

#include "rotset/flow_sim.hpp"
#include "rotset/rotation_set.hpp"

namespace rotset {

/// Sum of principal argument increments of consecutive points around z,
/// divided by 2 pi. Reversing the point order negates the result exactly.
double polyline_winding(const std::vector<Vec>& points, const Vec& z);

/// Winding displacement of a recorded square trajectory (events needed).
/// z defaults to the obstacle center and must lie strictly inside it.
double winding_displacement(const TrajectoryRecord& rec, const BilliardConfig& cfg,
                            const std::optional<Vec>& z = {});
/// winding_displacement / elapsed time.
double winding_rotation(const TrajectoryRecord& rec, const BilliardConfig& cfg,
                        const std::optional<Vec>& z = {});

/// Start of the orbit through the four side midpoints: (1/2, 0) heading to
/// (0, 1/2) when counterclockwise, to (0, -1/2) otherwise.
FlowState diamond_orbit_start(bool counterclockwise = true);
/// Length of one diamond period, 2 sqrt 2.
double diamond_period();

/// Folds an unfolded polyline into the square, splitting segments where they
/// cross the lines x = n + 1/2 and y = n + 1/2.
std::vector<Vec> fold_polyline(const std::vector<Vec>& unfolded);

/// Winding of one period of a square periodic orbit divided by its length.
double orbit_rotation_number(const PeriodicOrbit& orbit, const BilliardConfig& cfg,
                             const std::optional<Vec>& z = {});

/// Loop through the vertex ((0,0), (2n+1, 2n)) closed by at most two unit
/// steps (searched lexicographically).
LoopSpec long_diagonal_loop(int n, const SquareGraph& g);

struct SquareLoopResult {
  LoopSpec loop;
  int diagonal_n = 0;            ///< n for long-diagonal loops, 0 otherwise
  double rotation_number = 0.0;
  double length = 0.0;
};

struct SquareInterval {
  double v = 0.0;  ///< the interval is [-v, v]
  double lo = 0.0;
  double hi = 0.0;
  bool truncated = false;
  std::vector<SquareLoopResult> loops;
  std::vector<LoopFailure> failures;
};

/// Rotation numbers of enumerated loops plus every available long-diagonal
/// loop, symmetrized by reversal.
SquareInterval square_ar_interval(const SquareGraph& g, int max_len, std::size_t budget,
                                  const OrbitOptions& opts = {});

}  // namespace rotset
