#pragma once
/**
 * @file convex_hull.hpp
 * @brief Convex hulls of point sets in the plane and in space, in
 *        half-space form, with the distance from a point to the boundary.
 */

#include <cstddef>
#include <vector>

#include "rotset/geometry.hpp"

namespace rotset {

/// Half-space <normal, x> <= offset with a unit outward normal.
struct Facet {
  Vec normal;
  double offset = 0.0;
  std::vector<std::size_t> vertices;  ///< indices into the input point list
};

class ConvexHull {
 public:
  /// m = 2: monotone chain. m = 3: incremental hull. Points closer than
  /// `eps` to a supporting plane count as on it.
  static ConvexHull build(const std::vector<Vec>& points, double eps = 1e-10);

  int dim() const noexcept { return dim_; }
  /// False when the points span less than a full-dimensional body.
  bool full_dimensional() const noexcept { return full_; }
  /// Hull vertices as input indices; counter-clockwise in the plane.
  const std::vector<std::size_t>& vertex_ids() const noexcept { return vertex_ids_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }

  /// min over facets of offset - <normal, x>: positive strictly inside,
  /// equal to the distance to the boundary for interior points.
  double margin(const Vec& x) const;
  /// The facet attaining margin(x).
  const Facet& closest_facet(const Vec& x) const;
  /// Radius of the largest ball about 0 inside the hull (0 if 0 is not inside).
  double inscribed_radius() const;

 private:
  int dim_ = 0;
  bool full_ = false;
  std::vector<std::size_t> vertex_ids_;
  std::vector<Facet> facets_;
};

}  // namespace rotset
