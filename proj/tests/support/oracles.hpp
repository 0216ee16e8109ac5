#pragma once
// Independent reference computations for the test suites. Nothing here calls
// into the library's geometry or graph code: distances, centers and scans are
// re-derived from their definitions with plain loops.

#include <set>
#include <utility>
#include <vector>

#include "rotset/geometry.hpp"

namespace oracle {

using rotset::LatticeIndex;
using rotset::Vec;

/// Distance from p to the closed segment [a, b] via clamped projection.
double segment_distance(const std::vector<double>& p, const std::vector<double>& a,
                        const std::vector<double>& b);

std::vector<double> torus_center(const std::vector<int>& k);
std::vector<double> square_center(const std::vector<int>& k, double cx, double cy);

using Key = std::vector<int>;
struct GraphSets {
  std::set<Key> vertices;                  ///< torus: j; square: (i_x, i_y, j_x, j_y)
  std::set<std::pair<Key, Key>> edges;
};

/// Brute-force transition graph: every lattice point of a padded box is
/// tested against every candidate segment.
GraphSets torus_graph(int m, double r, double max_norm, bool with_edges = true);
/// Torus edge a -> b: a is not within 2r of the segment [0, a + b].
bool torus_edge(const Key& a, const Key& b, double r);
GraphSets square_graph(double r, double cx, double cy, double max_norm);

Key key_of(const LatticeIndex& k);

/// Forward long-double partial sum of arcsin(r / 2^{n-1}).
double eta_direct(double r, int terms);

/// Minimal positive angle between integer vectors of norm < N, by scanning
/// all pairs.
double beta_brute(int N, int dim);

/// Bounce orbit between neighbouring obstacles: length 2(1 - 2r).
double bounce_length(double r);
/// Zigzag between O_0 and O_(1,1), shift (2,0): speed 1/sqrt(1 + (1-2r)^2).
double zigzag_speed(double r);

/// Winding of a polyline around z by densely sampling every segment and
/// accumulating small angle steps (continuous branch).
double sampled_winding(const std::vector<Vec>& pts, const Vec& z, int substeps = 64);

/// Radius of the largest origin-centred disc inside the hull of 2D points,
/// from the supporting lines through every pair.
double inscribed_radius_2d(const std::vector<Vec>& pts);

/// Primitive directions d (canonical sign) for which some line of direction
/// d stays at distance >= r from every lattice point: the largest gap between
/// projections of lattice points onto the normal must reach 2r.
std::vector<Key> free_flight_brute(double r, int search = 6);

/// Minimum distance from lattice points to the line p + t d, t in [0, T].
double line_clearance(const Vec& p, const Vec& d, double T);

}  // namespace oracle
