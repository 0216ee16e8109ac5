#pragma once
/**
 * @file tracking.hpp
 * @brief Builds an admissible trajectory whose displacement follows t * u
 *        within a declared constant, for a target u inside the hull of a
 *        family of periodic orbits.
 *
 * All base loops start with the same vertex V (the hub), so repetitions of
 * any of them can be concatenated. With v_i = d(P_i) - |P_i| u the drift
 * x = d(Q) - |Q| u is steered greedily: append n copies of P_i minimizing
 * |x + n v_i|. The realized trajectory of the concatenated type is solved
 * incrementally and its drift is what the greedy step sees.
 *
 * Declared bound: M = L + K + s + s|u| with K = 4c(1 + |u|), c = 2r,
 * s = max |P_i| + 4c and L = (max |v_i| + K) / eps, where 1 - eps bounds
 * min_{i, t >= 0} |x + t v_i| over unit x (certified on a grid using that
 * this function is 1-Lipschitz).
 */

#include <vector>

#include "rotset/convex_hull.hpp"
#include "rotset/orbit_solver.hpp"

namespace rotset {

struct TrackingOptions {
  int repeat = 6;            ///< copies of a base loop inside one spliced loop
  int n_max = 64;            ///< max repetitions per greedy step
  double min_margin = 1e-3;  ///< required distance of u from the hull boundary
  std::size_t window = 40;   ///< points re-optimized after each append
  int certify_grid = 2048;   ///< directions (per circle) in the eps certificate
  OrbitOptions orbit;
};

/// Splices each loop (repeated `repeat` times) through the hub vertex with
/// connect_via_unit and solves the resulting periodic orbits. Every returned
/// orbit's type starts with a step equal to `hub`.
std::vector<PeriodicOrbit> make_tracking_base(const TorusGraph& g,
                                              const std::vector<LoopSpec>& loops,
                                              const LatticeIndex& hub,
                                              const TrackingOptions& opts = {});

struct TrackingBlock {
  std::size_t base = 0;
  int count = 0;
};

struct TrackingRun {
  Vec target;
  std::vector<Vec> base_rotation;
  std::vector<double> base_length;
  double hull_margin = 0.0;   ///< margin of u inside the base hull
  std::vector<TrackingBlock> blocks;

  AdmissibleType type;        ///< realized itinerary, k_0 = 0
  std::vector<Vec> points;    ///< reflection points x_0, x_1, ...
  std::vector<double> times;  ///< arc length at each reflection
  std::vector<double> drift;  ///< |x_n - x_0 - t_n u|

  double deviation_sup = 0.0;
  double block_deviation_sup = 0.0;  ///< max drift at block boundaries
  double K = 0.0;
  double L = 0.0;
  double s = 0.0;
  double eps = 0.0;
  double declared_M = 0.0;
  bool bound_holds = false;
  double total_time = 0.0;
  Vec empirical_rotation;
};

/// Requires u strictly inside the hull of the base rotation vectors (margin
/// at least opts.min_margin); runs until the realized length reaches T.
TrackingRun generate_tracking_path(const Vec& u, const std::vector<PeriodicOrbit>& base, double T,
                                   const BilliardConfig& cfg, const TrackingOptions& opts = {});

/// Certified eps for the drift steering vectors (0 if 0 is not inside their hull).
double steering_eps(const std::vector<Vec>& v, int grid);

}  // namespace rotset
