#include "rotset/obstacle_lattice.hpp"

#include <sstream>

namespace rotset {

BilliardConfig BilliardConfig::torus(int dim, double radius) {
  BilliardConfig cfg;
  cfg.dim = dim;
  cfg.radius = radius;
  cfg.center = Vec::zero(std::clamp(dim, 1, kMaxDim));
  cfg.geometry = GeometryKind::kTorusLift;
  return cfg;
}

BilliardConfig BilliardConfig::square(double radius, Vec center) {
  BilliardConfig cfg;
  cfg.dim = 2;
  cfg.radius = radius;
  cfg.center = center;
  cfg.geometry = GeometryKind::kSquareUnfold;
  return cfg;
}

void BilliardConfig::validate() const {
  std::ostringstream msg;
  msg.precision(17);
  if (dim < 2 || dim > kMaxDim) {
    msg << "dimension " << dim << " outside supported range [2, " << kMaxDim << "]";
    fail(ErrorCode::kConfig, msg.str());
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    msg << "radius must be positive, got " << radius;
    fail(ErrorCode::kConfig, msg.str());
  }
  if (!(radius < kSmallRadius)) {
    msg << "small obstacle violation: radius " << radius << " must be < sqrt(2)/4 = "
        << kSmallRadius;
    fail(ErrorCode::kConfig, msg.str());
  }
  if (is_square()) {
    if (dim != 2) {
      msg << "square geometry requires dim = 2, got " << dim;
      fail(ErrorCode::kConfig, msg.str());
    }
    if (center.dim() != 2) fail(ErrorCode::kConfig, "square center must have 2 coordinates");
    if (!(norm(center) + radius < kSmallRadius)) {
      msg << "small obstacle violation: |center| + radius = " << norm(center) + radius
          << " must be < sqrt(2)/4 = " << kSmallRadius;
      fail(ErrorCode::kConfig, msg.str());
    }
  }
}

Vec obstacle_center(const LatticeIndex& k, const BilliardConfig& cfg) {
  Vec c = to_vec(k);
  if (cfg.is_square()) {
    for (int a = 0; a < 2; ++a) c[a] += (k[a] % 2 == 0) ? cfg.center[a] : -cfg.center[a];
  }
  return c;
}

Ball obstacle(const LatticeIndex& k, const BilliardConfig& cfg) {
  return Ball{obstacle_center(k, cfg), cfg.radius};
}

ParityClass zeta(const LatticeIndex& k) {
  if (k.dim() != 2) fail(ErrorCode::kInvalidInput, "zeta is defined for m = 2 only");
  return ParityClass{k[0] & 1, k[1] & 1};
}

bool is_between(const LatticeIndex& k, const LatticeIndex& i, const LatticeIndex& j,
                const BilliardConfig& cfg) {
  if (k == i || k == j)
    fail(ErrorCode::kInvalidInput, "is_between: k must differ from both i and j");
  const Vec ck = obstacle_center(k, cfg);
  const Vec ci = obstacle_center(i, cfg);
  const double d = i == j ? norm(ck - ci)
                          : point_segment_distance(ck, ci, obstacle_center(j, cfg));
  return d <= 2.0 * cfg.radius + tol::kBetween;
}

std::vector<LatticeIndex> candidate_blockers(const LatticeIndex& i, const LatticeIndex& j,
                                             const BilliardConfig& cfg) {
  const Vec a = obstacle_center(i, cfg);
  const Vec b = obstacle_center(j, cfg);
  const double reach = 2.0 * cfg.radius + 1.0;
  const int m = i.dim();

  LatticeIndex lo(m);
  LatticeIndex hi(m);
  for (int d = 0; d < m; ++d) {
    lo[d] = static_cast<int>(std::floor(std::min(a[d], b[d]) - reach));
    hi[d] = static_cast<int>(std::ceil(std::max(a[d], b[d]) + reach));
  }

  std::vector<LatticeIndex> out;
  LatticeIndex k = lo;
  while (true) {
    if (k != i && k != j) {
      const Vec p = to_vec(k);
      const double d = (a == b) ? norm(p - a) : point_segment_distance(p, a, b);
      if (d <= reach) out.push_back(k);
    }
    int d = 0;
    for (; d < m; ++d) {
      if (++k[d] <= hi[d]) break;
      k[d] = lo[d];
    }
    if (d == m) break;
  }
  return out;
}

bool is_unobstructed(const LatticeIndex& i, const LatticeIndex& j, const BilliardConfig& cfg) {
  for (const auto& k : candidate_blockers(i, j, cfg))
    if (is_between(k, i, j, cfg)) return false;
  return true;
}

}  // namespace rotset
