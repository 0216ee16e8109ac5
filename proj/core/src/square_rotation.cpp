#include "rotset/square_rotation.hpp"

#include <numbers>
#include <map>
#include <sstream>

namespace rotset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec checked_reference(const BilliardConfig& cfg, const std::optional<Vec>& z) {
  if (!cfg.is_square()) fail(ErrorCode::kConfig, "winding is defined for the square billiard");
  const Vec ref = z.value_or(cfg.center);
  if (ref.dim() != 2 || !(norm(ref - cfg.center) < cfg.radius))
    fail(ErrorCode::kInvalidInput, "winding reference point must lie strictly inside the obstacle");
  return ref;
}

LatticeIndex cell_of(const Vec& p) {
  return LatticeIndex{static_cast<int>(std::floor(p[0] + 0.5)),
                      static_cast<int>(std::floor(p[1] + 0.5))};
}

Vec fold_into(const LatticeIndex& k, const Vec& p) {
  Vec x = p - to_vec(k);
  for (int a = 0; a < 2; ++a)
    if (k[a] & 1) x[a] = -x[a];
  return x;
}

}  // namespace

double polyline_winding(const std::vector<Vec>& points, const Vec& z) {
  // Positive and negative increments are summed separately in sorted order,
  // so the reversed polyline yields exactly the negated total.
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Vec a = points[i] - z;
    const Vec b = points[i + 1] - z;
    const double inc = std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
    (inc >= 0.0 ? pos : neg).push_back(std::abs(inc));
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  double sp = 0.0;
  double sn = 0.0;
  for (const double x : pos) sp += x;
  for (const double x : neg) sn += x;
  return (sp - sn) / kTwoPi;
}

double winding_displacement(const TrajectoryRecord& rec, const BilliardConfig& cfg,
                            const std::optional<Vec>& z) {
  const Vec ref = checked_reference(cfg, z);
  if (rec.geometry != GeometryKind::kSquareUnfold)
    fail(ErrorCode::kInvalidInput, "winding needs a square trajectory");
  if (rec.events.empty()) fail(ErrorCode::kInvalidInput, "winding needs recorded events");
  std::vector<Vec> pts;
  pts.reserve(rec.events.size());
  for (const auto& e : rec.events) pts.push_back(e.position);
  return polyline_winding(pts, ref);
}

double winding_rotation(const TrajectoryRecord& rec, const BilliardConfig& cfg,
                        const std::optional<Vec>& z) {
  const double t = rec.final.time - rec.initial.time;
  if (!(t > 0.0)) fail(ErrorCode::kInvalidInput, "winding rotation needs positive elapsed time");
  return winding_displacement(rec, cfg, z) / t;
}

FlowState diamond_orbit_start(bool counterclockwise) {
  FlowState s;
  s.position = Vec{0.5, 0.0};
  const double h = std::numbers::sqrt2 / 2.0;
  s.velocity = Vec{-h, counterclockwise ? h : -h};
  s.cell = LatticeIndex(2);
  return s;
}

double diamond_period() { return 2.0 * std::numbers::sqrt2; }

std::vector<Vec> fold_polyline(const std::vector<Vec>& unfolded) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i + 1 < unfolded.size(); ++i) {
    const Vec& A = unfolded[i];
    const Vec& B = unfolded[i + 1];
    const Vec D = B - A;
    std::vector<double> ts{0.0, 1.0};
    for (int a = 0; a < 2; ++a) {
      if (D[a] == 0.0) continue;
      const double lo = std::min(A[a], B[a]);
      const double hi = std::max(A[a], B[a]);
      for (double h = std::ceil(lo - 0.5) + 0.5; h < hi; h += 1.0)
        if (h > lo) ts.push_back((h - A[a]) / D[a]);
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
      const double t0 = ts[j];
      const double t1 = ts[j + 1];
      if (t1 - t0 < 1e-15) continue;
      const LatticeIndex k = cell_of(A + D * (0.5 * (t0 + t1)));
      if (out.empty()) out.push_back(fold_into(k, A + D * t0));
      out.push_back(fold_into(k, A + D * t1));
    }
  }
  return out;
}

double orbit_rotation_number(const PeriodicOrbit& orbit, const BilliardConfig& cfg,
                             const std::optional<Vec>& z) {
  const Vec ref = checked_reference(cfg, z);
  std::vector<Vec> pts = orbit.points;
  pts.push_back(orbit.points.front() + orbit.displacement);
  return polyline_winding(fold_polyline(pts), ref) / orbit.length;
}

LoopSpec long_diagonal_loop(int n, const SquareGraph& g) {
  if (n < 0) fail(ErrorCode::kInvalidInput, "long diagonal index must be >= 0");
  const SquareVertex diag{ParityClass{0, 0}, LatticeIndex{2 * n + 1, 2 * n}};
  const auto d = g.index_of(diag);
  if (!d) {
    std::ostringstream msg;
    msg << "obstacle too large: (" << 2 * n + 1 << "," << 2 * n
        << ") is not a vertex at r = " << g.config().radius << " (max_norm " << g.max_norm()
        << ")";
    fail(ErrorCode::kConfig, msg.str());
  }
  std::vector<LatticeIndex> units{LatticeIndex{1, 0}, LatticeIndex{-1, 0}, LatticeIndex{0, 1},
                                  LatticeIndex{0, -1}};
  std::sort(units.begin(), units.end());

  auto step_vertex = [&](const LatticeIndex& from_cell,
                         const LatticeIndex& unit) -> std::optional<std::uint32_t> {
    const ParityClass i = zeta(from_cell);
    const auto id = g.index_of(SquareVertex{i, i + unit});
    if (!id) return std::nullopt;
    return static_cast<std::uint32_t>(*id);
  };
  const ParityClass origin{0, 0};
  const LatticeIndex after = diag.to;
  for (const auto& u1 : units) {
    const auto v1 = step_vertex(after, u1);
    if (!v1 || !g.has_edge(*d, *v1)) continue;
    const LatticeIndex c1 = after + u1;
    if (zeta(c1) == origin && g.has_edge(*v1, *d))
      return g.loop_from_ids({static_cast<std::uint32_t>(*d), *v1});
  }
  for (const auto& u1 : units)
    for (const auto& u2 : units) {
      const auto v1 = step_vertex(after, u1);
      if (!v1 || !g.has_edge(*d, *v1)) continue;
      const LatticeIndex c1 = after + u1;
      const auto v2 = step_vertex(c1, u2);
      if (!v2 || !g.has_edge(*v1, *v2)) continue;
      if (zeta(c1 + u2) == origin && g.has_edge(*v2, *d))
        return g.loop_from_ids({static_cast<std::uint32_t>(*d), *v1, *v2});
    }
  fail(ErrorCode::kInvariant, "no unit-step return path for the long diagonal loop");
}

SquareInterval square_ar_interval(const SquareGraph& g, int max_len, std::size_t budget,
                                  const OrbitOptions& opts) {
  const auto& cfg = g.config();
  SquareInterval out;
  std::vector<std::pair<LoopSpec, int>> loops;
  std::map<std::vector<std::uint32_t>, std::size_t> seen;
  // Walks are compared up to rotation by their smallest-id form.
  auto key = [](std::vector<std::uint32_t> ids) {
    std::rotate(ids.begin(), std::min_element(ids.begin(), ids.end()), ids.end());
    return ids;
  };
  for (auto& l : enumerate_loops(g, max_len, budget)) {
    seen.emplace(key(l.vertex_ids), loops.size());
    loops.emplace_back(std::move(l), 0);
  }
  out.truncated = loops.size() >= budget;
  for (int n = 1;; ++n) {
    const SquareVertex diag{ParityClass{0, 0}, LatticeIndex{2 * n + 1, 2 * n}};
    if (!g.index_of(diag)) break;
    LoopSpec l = long_diagonal_loop(n, g);
    const auto [it, fresh] = seen.emplace(key(l.vertex_ids), loops.size());
    if (fresh) {
      loops.emplace_back(std::move(l), n);
    } else {
      loops[it->second].second = n;
    }
  }

  for (std::size_t i = 0; i < loops.size(); ++i) {
    try {
      const PeriodicOrbit orbit = solve_periodic_orbit(loops[i].first, cfg, opts);
      const double rho = orbit_rotation_number(orbit, cfg);
      out.loops.push_back({loops[i].first, loops[i].second, rho, orbit.length});
      out.hi = std::max(out.hi, std::abs(rho));
    } catch (const Error& e) {
      out.failures.push_back({i, e.code(), e.what()});
    }
  }
  out.v = out.hi;
  out.lo = -out.hi;
  return out;
}

}  // namespace rotset
