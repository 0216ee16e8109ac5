#pragma once
/**
 * @file transition_graph.hpp
 * @brief The finite directed graph of admissible one-step transitions.
 *
 * Torus: vertices are the nonzero lattice displacements j with no obstacle
 * between O_0 and O_j; there is an edge j -> i unless O_j is between O_0 and
 * O_{j+i}. Paths in this graph are exactly the difference sequences of
 * admissible itineraries.
 *
 * Square: the unfolding is only invariant under even translations, so a
 * vertex also remembers the parity class of the cell it starts from. Vertex
 * (i, j) with i in {0,1}^2 stands for a step from cell i to cell j; an edge
 * (i, j) -> (i', j') requires zeta(j) == i' and O_j not between O_i and
 * O_{j + j' - i'}.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "rotset/obstacle_lattice.hpp"

namespace rotset {

/// Symbolic itinerary k_0, k_1, ... of obstacle cells. A periodic type stores
/// one period k_0..k_{q-1} plus the shift p with k_{n+q} = k_n + p.
struct AdmissibleType {
  std::vector<LatticeIndex> cells;
  std::optional<LatticeIndex> shift;

  bool periodic() const noexcept { return shift.has_value(); }
  int period() const noexcept { return static_cast<int>(cells.size()); }
  /// k_n for any n >= 0 (periodic types are extended by the shift).
  LatticeIndex cell(long n) const;
  /// The time-reversed type (periodic types stay periodic with shift -p).
  AdmissibleType reversed() const;
};

/// Closed walk in a transition graph, in the form the solver consumes.
struct LoopSpec {
  std::vector<std::uint32_t> vertex_ids;
  std::vector<LatticeIndex> steps;  ///< displacement l_n of each vertex
  LatticeIndex start_cell;          ///< k_0: origin (torus) or parity class (square)
  LatticeIndex shift;               ///< p = sum of steps

  int period() const noexcept { return static_cast<int>(steps.size()); }
  AdmissibleType to_type() const;
};

/// Adjacency shared by both graph flavours. Immutable after construction.
class Digraph {
 public:
  std::size_t vertex_count() const noexcept { return succ_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  bool has_edge(std::size_t from, std::size_t to) const {
    return dense_[from * succ_.size() + to];
  }
  const std::vector<std::uint32_t>& successors(std::size_t v) const { return succ_[v]; }

 protected:
  void init(std::size_t n);
  void add_edge(std::size_t from, std::size_t to);

 private:
  std::vector<std::vector<std::uint32_t>> succ_;
  std::vector<bool> dense_;
  std::size_t edges_ = 0;
};

/// Default vertex bound ceil(1/(2r)) + 1.
double default_max_norm(double radius);

class TorusGraph : public Digraph {
 public:
  /// Builds G for a torus config. max_norm defaults to default_max_norm(r)
  /// and must be at least sqrt(m).
  static TorusGraph build(const BilliardConfig& cfg, std::optional<double> max_norm = {});

  const BilliardConfig& config() const noexcept { return cfg_; }
  double max_norm() const noexcept { return max_norm_; }
  /// True when some vertex lies in the outermost unit shell of the bound,
  /// i.e. the bound may be cutting off vertices.
  bool bound_binds() const noexcept { return bound_binds_; }

  const std::vector<LatticeIndex>& vertices() const noexcept { return vertices_; }
  const LatticeIndex& vertex(std::size_t id) const { return vertices_[id]; }
  std::optional<std::size_t> index_of(const LatticeIndex& j) const;
  bool has_edge(const LatticeIndex& from, const LatticeIndex& to) const;
  using Digraph::has_edge;

  /// Builds a LoopSpec from a closed walk of vertex ids (validated).
  LoopSpec loop_from_ids(const std::vector<std::uint32_t>& ids) const;
  /// Same, from displacement labels.
  LoopSpec loop_from_steps(const std::vector<LatticeIndex>& steps) const;

 private:
  BilliardConfig cfg_;
  double max_norm_ = 0.0;
  bool bound_binds_ = false;
  std::vector<LatticeIndex> vertices_;
};

struct SquareVertex {
  ParityClass from;   ///< i in Q
  LatticeIndex to;    ///< j, absolute cell

  LatticeIndex displacement() const { return to - from; }
  bool operator==(const SquareVertex&) const = default;
  auto operator<=>(const SquareVertex&) const = default;
};

class SquareGraph : public Digraph {
 public:
  static SquareGraph build(const BilliardConfig& cfg, std::optional<double> max_norm = {});

  const BilliardConfig& config() const noexcept { return cfg_; }
  double max_norm() const noexcept { return max_norm_; }
  bool bound_binds() const noexcept { return bound_binds_; }

  const std::vector<SquareVertex>& vertices() const noexcept { return vertices_; }
  const SquareVertex& vertex(std::size_t id) const { return vertices_[id]; }
  std::optional<std::size_t> index_of(const SquareVertex& v) const;
  using Digraph::has_edge;

  LoopSpec loop_from_ids(const std::vector<std::uint32_t>& ids) const;

 private:
  BilliardConfig cfg_;
  double max_norm_ = 0.0;
  bool bound_binds_ = false;
  std::vector<SquareVertex> vertices_;
};

/// Checks the admissibility conditions directly through is_between (not via a
/// graph). Torus types must start at k_0 = 0; square types at a parity class.
bool is_admissible(const AdmissibleType& t, const BilliardConfig& cfg);

/// k_0 = 0 and k_n = l_1 + ... + l_n for a path l_1, ..., l_s of the graph.
AdmissibleType path_to_type(const TorusGraph& g, const std::vector<LatticeIndex>& path);
/// Inverse of path_to_type on its range (difference sequence).
std::vector<LatticeIndex> type_to_path(const TorusGraph& g, const AdmissibleType& t);

/// Square flavour: k_0 = first vertex's parity class, then partial sums.
AdmissibleType path_to_type(const SquareGraph& g, const std::vector<SquareVertex>& path);
std::vector<SquareVertex> type_to_path(const SquareGraph& g, const AdmissibleType& t);

/// Path a -> u [-> v] -> b of length <= 3 through unit vectors, picking for a
/// (resp. b) the first unit vector in lexicographic order with negative
/// inner product.
std::vector<LatticeIndex> connect_via_unit(const LatticeIndex& a, const LatticeIndex& b,
                                           const TorusGraph& g);

/// Simple cycles of length 2..max_len, one per rotation class (the rotation
/// starting at its smallest vertex id), in lexicographic order of vertex id
/// sequences. At most `budget` cycles are returned.
std::vector<std::vector<std::uint32_t>> enumerate_cycles(const Digraph& g, int max_len,
                                                         std::size_t budget);

std::vector<LoopSpec> enumerate_loops(const TorusGraph& g, int max_len, std::size_t budget);
std::vector<LoopSpec> enumerate_loops(const SquareGraph& g, int max_len, std::size_t budget);

}  // namespace rotset
