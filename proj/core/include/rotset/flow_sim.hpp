#pragma once
/**
 * @file flow_sim.hpp
 * @brief Event-driven billiard flow in the torus lifting and in the square.
 *
 * Torus positions are kept lifted in R^m. The next collision is found by an
 * integer-grid walk along the ray over the unit cubes centred at lattice
 * points, testing the obstacles of every visited cube and its neighbours.
 *
 * The square is simulated folded, in S = [-1/2, 1/2]^2, with wall and corner
 * events. The unfolding cell k is carried along so that the unfolded
 * position is k + mirror_k(x), mirror_k flipping axis a when k_a is odd.
 */

#include <optional>
#include <string_view>
#include <vector>

#include "rotset/transition_graph.hpp"

namespace rotset {

enum class EventKind { kStart, kObstacle, kWall, kCorner, kHorizon };
std::string_view to_string(EventKind kind);

struct FlowState {
  Vec position;        ///< lifted (torus) or folded (square)
  Vec velocity;        ///< unit
  double time = 0.0;
  LatticeIndex cell;   ///< torus: nearest lattice point; square: unfolding cell
  long reflections = 0;
};

struct FlowEvent {
  double time = 0.0;
  Vec position;
  LatticeIndex cell;
  EventKind kind = EventKind::kStart;
};

struct TrajectoryRecord {
  GeometryKind geometry = GeometryKind::kTorusLift;
  FlowState initial;
  FlowState final;
  std::vector<FlowEvent> events;
  /// Obstacle cells hit, in order. When the start point lies on an obstacle
  /// boundary that obstacle's cell comes first.
  std::vector<LatticeIndex> itinerary;
  Vec displacement;               ///< unfolded final minus unfolded initial position
  long obstacle_hits = 0;
  long wall_hits = 0;
  long corner_hits = 0;
  long grazing_passes = 0;
  double min_incidence = 1.0;     ///< min |<v, n>| over obstacle reflections
  double max_speed_error = 0.0;   ///< max | |v| - 1 | after an event
};

struct StepResult {
  FlowState state;
  EventKind kind = EventKind::kHorizon;
  std::optional<LatticeIndex> obstacle;  ///< set for kObstacle
  double incidence = 0.0;                ///< |<v, n>| at an obstacle hit
  long grazing = 0;
};

/// Moves to the next event, or to time `horizon` when nothing happens first.
/// `skip` excludes one obstacle (the one just reflected from).
StepResult advance_to_next_event(const FlowState& s, const BilliardConfig& cfg, double horizon,
                                 const std::optional<LatticeIndex>& skip = {});

struct SimulateOptions {
  long max_events = 10'000'000;
  bool record_events = true;
};

TrajectoryRecord simulate(const BilliardConfig& cfg, const FlowState& initial, double t_max,
                          const SimulateOptions& opts = {});

/// A starting state with the cell filled in from the position.
FlowState make_state(const BilliardConfig& cfg, const Vec& position, const Vec& velocity);

/// Unfolded position k + mirror_k(x) of a folded square point.
Vec unfold(const LatticeIndex& k, const Vec& folded);
/// Unfolded velocity mirror_k(v).
Vec unfold_direction(const LatticeIndex& k, const Vec& folded);

/// displacement / elapsed time.
Vec empirical_rotation(const TrajectoryRecord& rec);

/// The itinerary as an AdmissibleType, translated so that k_0 = 0 (torus) or
/// k_0 is a parity class (square).
AdmissibleType itinerary_type(const TrajectoryRecord& rec);

/// Primitive (p, q) with p > 0 or (p == 0, q > 0) and |(p,q)| <= 1/(2r),
/// sorted lexicographically. m = 2 only.
std::vector<LatticeIndex> free_flight_directions(const BilliardConfig& cfg);

/// Start point on the midline of the obstacle-free channel of direction d.
Vec channel_midline_point(const LatticeIndex& d);

}  // namespace rotset
