#pragma once
// Static SVG renderings for m = 2 results.

#include <string>
#include <vector>

#include "rotset/rotation_set.hpp"

namespace rotset::svg {

/// Rotation vectors, hull polygon, the unit circle and lower-bound circles.
std::string hull_plot(const RotationSetEstimate& e, const std::vector<double>& circles);

/// Obstacles near the orbit and one period of the orbit in the lift.
std::string orbit_plot(const std::vector<Vec>& points, const BilliardConfig& cfg,
                       const std::string& caption);

/// A polyline folded into the square with the obstacle and a caption.
std::string square_plot(const std::vector<Vec>& folded, const BilliardConfig& cfg,
                        const std::string& caption);

}  // namespace rotset::svg
