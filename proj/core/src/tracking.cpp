#include "rotset/tracking.hpp"

#include <limits>
#include <numbers>
#include <sstream>

namespace rotset {

namespace {

// min over i and t >= 0 of |x + t v_i| for a unit x.
double steering_value(const Vec& x, const std::vector<Vec>& vhat) {
  double f = 1.0;
  for (const auto& v : vhat) {
    const double c = dot(x, v);
    if (c < 0.0) f = std::min(f, std::sqrt(std::max(0.0, 1.0 - c * c)));
  }
  return f;
}

}  // namespace

double steering_eps(const std::vector<Vec>& v, int grid) {
  if (v.empty()) fail(ErrorCode::kInvalidInput, "steering_eps needs vectors");
  if (grid < 8) fail(ErrorCode::kInvalidInput, "steering grid too coarse");
  const int m = v.front().dim();
  std::vector<Vec> vhat;
  for (const auto& w : v) vhat.push_back(normalized(w));
  double worst = 0.0;
  double cover = 0.0;
  if (m == 2) {
    const double h = 2.0 * std::numbers::pi / grid;
    for (int k = 0; k < grid; ++k)
      worst = std::max(worst, steering_value(Vec{std::cos(k * h), std::sin(k * h)}, vhat));
    cover = h / 2.0;
  } else if (m == 3) {
    const int lat = grid / 2;
    const double dt = std::numbers::pi / lat;
    const double dp = 2.0 * std::numbers::pi / grid;
    for (int i = 0; i < lat; ++i) {
      const double t = (i + 0.5) * dt;
      for (int j = 0; j < grid; ++j) {
        const double p = j * dp;
        const Vec x{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
        worst = std::max(worst, steering_value(x, vhat));
      }
    }
    cover = dt / 2.0 + dp / 2.0;
  } else {
    fail(ErrorCode::kNotImplemented, "drift steering is certified for m = 2 and m = 3");
  }
  return std::max(0.0, 1.0 - (worst + cover));
}

std::vector<PeriodicOrbit> make_tracking_base(const TorusGraph& g,
                                              const std::vector<LoopSpec>& loops,
                                              const LatticeIndex& hub,
                                              const TrackingOptions& opts) {
  if (!g.index_of(hub)) fail(ErrorCode::kInvalidInput, "hub is not a graph vertex");
  if (opts.repeat < 1) fail(ErrorCode::kInvalidInput, "repeat must be >= 1");
  std::vector<PeriodicOrbit> out;
  for (const auto& loop : loops) {
    const auto& steps = loop.steps;
    std::vector<LatticeIndex> walk;
    const auto at = std::find(steps.begin(), steps.end(), hub);
    if (at != steps.end()) {
      std::vector<LatticeIndex> rotated(at, steps.end());
      rotated.insert(rotated.end(), steps.begin(), at);
      for (int r = 0; r < opts.repeat; ++r) walk.insert(walk.end(), rotated.begin(), rotated.end());
    } else {
      const auto in = connect_via_unit(hub, steps.front(), g);
      const auto back = connect_via_unit(steps.back(), hub, g);
      walk.push_back(hub);
      walk.insert(walk.end(), in.begin() + 1, in.end() - 1);
      for (int r = 0; r < opts.repeat; ++r) walk.insert(walk.end(), steps.begin(), steps.end());
      walk.insert(walk.end(), back.begin() + 1, back.end() - 1);
    }
    out.push_back(solve_periodic_orbit(g.loop_from_steps(walk), g.config(), opts.orbit));
  }
  return out;
}

TrackingRun generate_tracking_path(const Vec& u, const std::vector<PeriodicOrbit>& base, double T,
                                   const BilliardConfig& cfg, const TrackingOptions& opts) {
  cfg.validate();
  if (!cfg.is_torus()) fail(ErrorCode::kConfig, "tracking is implemented for the torus");
  if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorCode::kInvalidInput, "T must be positive");
  if (base.empty()) fail(ErrorCode::kInvalidInput, "tracking needs base orbits");
  if (u.dim() != cfg.dim) fail(ErrorCode::kInvalidInput, "target dimension mismatch");

  const LatticeIndex hub = base.front().type.cells[1] - base.front().type.cells[0];
  for (const auto& p : base) {
    if (!is_zero(p.type.cells[0]) || !(p.type.cells[1] - p.type.cells[0] == hub))
      fail(ErrorCode::kInvalidInput, "base orbits must start at 0 with a common first vertex");
  }

  TrackingRun run;
  run.target = u;
  for (const auto& p : base) {
    run.base_rotation.push_back(p.rotation_vector);
    run.base_length.push_back(p.length);
  }
  const ConvexHull hull = ConvexHull::build(run.base_rotation);
  if (!hull.full_dimensional())
    fail(ErrorCode::kInvalidInput, "base rotation vectors do not span a full-dimensional hull");
  run.hull_margin = hull.margin(u);
  if (run.hull_margin < opts.min_margin) {
    const Facet& f = hull.closest_facet(u);
    std::ostringstream msg;
    msg.precision(6);
    msg << "target " << to_string(u) << " is not strictly inside the base hull: violates <"
        << to_string(f.normal) << ", x> <= " << f.offset << " - " << opts.min_margin
        << " (value " << dot(f.normal, u) << ")";
    fail(ErrorCode::kInvalidInput, msg.str());
  }

  std::vector<Vec> steer;
  double vmax = 0.0;
  double pmax = 0.0;
  for (const auto& p : base) {
    steer.push_back(p.displacement - u * p.length);
    vmax = std::max(vmax, norm(steer.back()));
    pmax = std::max(pmax, p.length);
  }
  run.eps = steering_eps(steer, opts.certify_grid);
  if (!(run.eps > 0.0))
    fail(ErrorCode::kSolver, "could not certify a positive steering margin; refine the grid");
  const double c = 2.0 * cfg.radius;
  run.K = 4.0 * c * (1.0 + norm(u));
  run.s = pmax + 4.0 * c;
  run.L = std::max((vmax + run.K) / run.eps, run.K);
  run.declared_M = run.L + run.K + run.s + run.s * norm(u);

  std::vector<LatticeIndex> cells;
  std::vector<Vec> X;
  std::vector<std::size_t> block_ends;
  LatticeIndex end_cell(cfg.dim);
  double length = 0.0;

  auto drift_at = [&](std::size_t idx, double t) { return (X[idx] - X[0]) - u * t; };

  auto resolve = [&](std::size_t a, std::size_t b) {
    if (b - a < 2) return;
    const LatticeIndex shift = cells[a];
    const Vec sv = to_vec(shift);
    AdmissibleType win;
    OrbitOptions o = opts.orbit;
    o.check_clearance = false;
    for (std::size_t n = a; n <= b; ++n) {
      win.cells.push_back(cells[n] - shift);
      o.initial.push_back(X[n] - sv);
    }
    const ConstrainedPath path = solve_constrained_path(win, X[a] - sv, X[b] - sv, cfg, o);
    for (std::size_t n = a + 1; n < b; ++n) X[n] = path.points[n - a] + sv;
  };

  while (length < T) {
    Vec x = X.empty() ? Vec::zero(cfg.dim) : drift_at(X.size() - 1, length);
    std::size_t bi = 0;
    int bn = 1;
    double bv = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < base.size(); ++i)
      for (int n = 1; n <= opts.n_max; ++n)
        if (const double val = norm(x + steer[i] * n); val < bv) bv = val, bi = i, bn = n;

    const PeriodicOrbit& P = base[bi];
    if (X.empty()) {
      cells.push_back(end_cell);
      X.push_back(P.points[0]);
    }
    const std::size_t before = X.size();
    const int q = P.type.period();
    for (int rep = 0; rep < bn; ++rep) {
      const Vec off = to_vec(end_cell);
      for (int k = 1; k <= q; ++k) {
        cells.push_back(end_cell + P.type.cell(k));
        X.push_back(off + (k < q ? P.points[static_cast<std::size_t>(k)]
                                  : P.points[0] + P.displacement));
      }
      end_cell = cells.back();
    }
    const std::size_t a = before - 1 > opts.window ? before - 1 - opts.window : 0;
    resolve(a, X.size() - 1);
    run.blocks.push_back({bi, bn});
    block_ends.push_back(X.size() - 1);
    length = broken_line_length(X);
  }

  // Final polish of the whole itinerary with both ends pinned.
  {
    AdmissibleType all;
    all.cells = cells;
    OrbitOptions o = opts.orbit;
    o.initial = X;
    const ConstrainedPath path = solve_constrained_path(all, X.front(), X.back(), cfg, o);
    X = path.points;
    if (path.endpoint_crossing)
      fail(ErrorCode::kInvariant, "tracking path leaves through its first or last obstacle");
  }

  run.type.cells = cells;
  run.points = X;
  run.times.assign(X.size(), 0.0);
  run.drift.assign(X.size(), 0.0);
  for (std::size_t n = 1; n < X.size(); ++n) run.times[n] = run.times[n - 1] + norm(X[n] - X[n - 1]);
  for (std::size_t n = 0; n < X.size(); ++n) {
    run.drift[n] = norm(drift_at(n, run.times[n]));
    run.deviation_sup = std::max(run.deviation_sup, run.drift[n]);
  }
  for (const auto e : block_ends) run.block_deviation_sup = std::max(run.block_deviation_sup, run.drift[e]);
  run.total_time = run.times.back();
  run.empirical_rotation = (X.back() - X.front()) * (1.0 / run.total_time);
  run.bound_holds = run.deviation_sup <= run.declared_M;
  return run;
}

}  // namespace rotset
