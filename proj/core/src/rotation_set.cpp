#include "rotset/rotation_set.hpp"

#include <functional>
#include <limits>
#include <numbers>
#include <set>

namespace rotset {

// ---------------------------------------------------------------------------
// eta

namespace {
void check_eta_radius(double r) {
  if (!(r > 0.0) || r > kSmallRadius + 1e-15)
    fail(ErrorCode::kInvalidInput, "eta needs 0 < r <= sqrt(2)/4");
}
}  // namespace

int eta_terms_needed(double radius, double eps) {
  check_eta_radius(radius);
  if (!(eps > 0.0)) fail(ErrorCode::kInvalidInput, "eta tolerance must be positive");
  int n = 1;
  while (std::numbers::pi * radius * std::ldexp(1.0, 1 - n) >= eps) ++n;
  return n;
}

double eta_partial(double radius, int terms) {
  check_eta_radius(radius);
  double sum = 0.0;
  for (int n = terms - 1; n >= 0; --n) sum += std::asin(radius * std::ldexp(1.0, 1 - n));
  return sum;
}

double eta(double radius, double eps) { return eta_partial(radius, eta_terms_needed(radius, eps)); }

// ---------------------------------------------------------------------------
// beta and N(r)

double beta(int N, int dim) {
  if (N < 2) fail(ErrorCode::kInvalidInput, "beta needs N >= 2");
  if (N > 3) fail(ErrorCode::kNotImplemented, "beta is tabulated for N <= 3 only");
  if (dim < 1) fail(ErrorCode::kInvalidInput, "beta needs dim >= 1");
  const int max2 = N * N - 1;
  const int max_coord = N - 1;

  // sums[k][w]: w is a sum of k squares of integers.
  std::vector<std::vector<bool>> sums(static_cast<std::size_t>(dim) + 1,
                                      std::vector<bool>(static_cast<std::size_t>(max2) + 1));
  sums[0][0] = true;
  for (int k = 1; k <= dim; ++k)
    for (int w = 0; w <= max2; ++w)
      for (int c = 0; c * c <= w; ++c)
        if (sums[k - 1][w - c * c]) sums[k][w] = true;

  double best_cos = -1.0;
  std::vector<int> u;
  std::vector<int> v;
  // v ranges over its coordinates on the support of u plus a remainder norm
  // carried by the other dim - s coordinates.
  std::function<void(int, int)> visit_v = [&](int pos, int vn2) {
    const int s = static_cast<int>(u.size());
    if (pos == s) {
      int d = 0;
      int un2 = 0;
      for (int i = 0; i < s; ++i) {
        d += u[i] * v[i];
        un2 += u[i] * u[i];
      }
      if (d <= 0) return;
      for (int w = 0; vn2 + w <= max2; ++w) {
        if (!sums[dim - s][w] || vn2 + w == 0) continue;
        const long num = static_cast<long>(d) * d;
        const long den = static_cast<long>(un2) * (vn2 + w);
        if (num == den) continue;
        best_cos = std::max(best_cos, d / std::sqrt(static_cast<double>(den)));
      }
      return;
    }
    for (int c = -max_coord; c <= max_coord; ++c) {
      if (vn2 + c * c > max2) continue;
      v[pos] = c;
      visit_v(pos + 1, vn2 + c * c);
    }
  };
  // Canonical u: positive non-increasing entries.
  std::function<void(int, int)> visit_u = [&](int cap, int un2) {
    if (!u.empty()) {
      v.assign(u.size(), 0);
      visit_v(0, 0);
    }
    if (static_cast<int>(u.size()) == dim) return;
    for (int c = 1; c <= cap; ++c) {
      if (un2 + c * c > max2) break;
      u.push_back(c);
      visit_u(c, un2 + c * c);
      u.pop_back();
    }
  };
  visit_u(max_coord, 0);
  return std::acos(std::clamp(best_cos, -1.0, 1.0));
}

std::optional<int> n_of_r(double radius, int dim) {
  const double e = eta(radius);
  for (int N = 3; N >= 2; --N)
    if (e < beta(N, std::min(dim, 2 * N * N - 2)) / 2.0) return N;
  return std::nullopt;
}

AnalyticBounds analytic_lower_bounds(const BilliardConfig& cfg) {
  cfg.validate();
  if (!cfg.is_torus()) fail(ErrorCode::kConfig, "analytic bounds apply to the torus");
  AnalyticBounds b;
  b.eta = eta(cfg.radius);
  b.dimension_radius = std::sqrt(2.0 / (std::log(static_cast<double>(cfg.dim)) + 5.0));
  b.eta_radius = (1.0 - std::numbers::sqrt2 / 2.0) * std::cos(b.eta);
  b.n = n_of_r(cfg.radius, cfg.dim);
  if (b.n) {
    const double N = *b.n;
    b.lattice_angle_radius = ((N - 1.0) / (N + 1.0)) * std::cos(2.0 * b.eta);
  }
  b.best = std::max({b.dimension_radius, b.eta_radius, b.lattice_angle_radius.value_or(0.0)});
  return b;
}

// ---------------------------------------------------------------------------
// Outer bound

double outer_ratio(double c1, double c2, double alpha) {
  return std::sqrt(c1 * c1 + c2 * c2 + 2.0 * c1 * c2 * std::cos(alpha)) / (c1 + c2);
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Lower bound on the turn at x for flights O_y -> x -> O_z.
double cone_gap(const Vec& x, const Vec& cy, const Vec& cz, double r) {
  const Vec a = x - cy;
  const Vec b = cz - x;
  const double gap = angle_between(a, b) - std::asin(r / norm(a)) - std::asin(r / norm(b));
  return std::max(0.0, gap);
}

template <class F>
double golden_min(F&& f, double lo, double hi, int iters) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

Vec sphere_point(double theta, double phi, double r) {
  return Vec{r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
             r * std::cos(theta)};
}

double min_turn_planar(const Vec& cy, const Vec& cz, double r, int samples) {
  auto f = [&](double t) { return cone_gap(Vec{r * std::cos(t), r * std::sin(t)}, cy, cz, r); };
  const double h = 2.0 * std::numbers::pi / samples;
  int best = 0;
  double fb = f(0.0);
  for (int k = 1; k < samples; ++k)
    if (const double fk = f(k * h); fk < fb) fb = fk, best = k;
  if (fb == 0.0) return 0.0;
  return std::min(fb, golden_min(f, (best - 1) * h, (best + 1) * h, 60));
}

double min_turn_spatial(const Vec& cy, const Vec& cz, double r, int samples) {
  const int lat = std::max(2, samples / 2);
  const double dt = std::numbers::pi / lat;
  const double dp = 2.0 * std::numbers::pi / samples;
  double bt = 0.0;
  double bp = 0.0;
  double fb = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lat; ++i)
    for (int j = 0; j < samples; ++j) {
      const double t = (i + 0.5) * dt;
      const double p = j * dp;
      if (const double fv = cone_gap(sphere_point(t, p, r), cy, cz, r); fv < fb)
        fb = fv, bt = t, bp = p;
    }
  if (fb == 0.0) return 0.0;
  double wt = dt;
  double wp = dp;
  for (int round = 0; round < 6; ++round) {
    double t_best = bt;
    double ft = std::numeric_limits<double>::infinity();
    for (int k = -20; k <= 20; ++k) {
      const double t = bt + wt * k / 20.0;
      if (const double v = cone_gap(sphere_point(t, bp, r), cy, cz, r); v < ft) ft = v, t_best = t;
    }
    bt = t_best;
    double p_best = bp;
    double fp = std::numeric_limits<double>::infinity();
    for (int k = -20; k <= 20; ++k) {
      const double p = bp + wp * k / 20.0;
      if (const double v = cone_gap(sphere_point(bt, p, r), cy, cz, r); v < fp) fp = v, p_best = p;
    }
    bp = p_best;
    fb = std::min({fb, ft, fp});
    wt *= 0.2;
    wp *= 0.2;
  }
  return fb;
}

}  // namespace

OuterBound outer_bound(const TorusGraph& g, int samples) {
  const auto& cfg = g.config();
  if (cfg.dim > 3) fail(ErrorCode::kNotImplemented, "outer bound is sampled for m <= 3 only");
  if (samples < 8) fail(ErrorCode::kInvalidInput, "outer bound needs at least 8 samples");
  const double r = cfg.radius;
  OuterBound ob;
  ob.samples = samples;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& v : g.vertices()) {
    lo = std::min(lo, norm(v));
    hi = std::max(hi, norm(v));
  }
  ob.c1 = lo - 2.0 * r;
  ob.c2 = hi + 2.0 * r;

  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < g.vertex_count() && alpha > 0.0; ++a) {
    const Vec cy = -to_vec(g.vertex(a));
    for (const auto b : g.successors(a)) {
      const Vec cz = to_vec(g.vertex(b));
      const double t = cfg.dim == 2 ? min_turn_planar(cy, cz, r, samples)
                                    : min_turn_spatial(cy, cz, r, samples);
      alpha = std::min(alpha, t);
      if (alpha == 0.0) break;
    }
  }
  ob.alpha = std::isfinite(alpha) ? alpha : 0.0;
  ob.a = outer_ratio(ob.c1, ob.c2, ob.alpha);
  return ob;
}

// ---------------------------------------------------------------------------
// Loop families

LoopSpec canonical_rotation(const TorusGraph& g, const LoopSpec& loop) {
  const auto& ids = loop.vertex_ids;
  std::vector<std::uint32_t> best = ids;
  for (std::size_t s = 1; s < ids.size(); ++s) {
    std::vector<std::uint32_t> rot(ids.begin() + static_cast<long>(s), ids.end());
    rot.insert(rot.end(), ids.begin(), ids.begin() + static_cast<long>(s));
    if (rot < best) best = rot;
  }
  return g.loop_from_ids(best);
}

LoopSpec reversed_loop(const TorusGraph& g, const LoopSpec& loop) {
  std::vector<LatticeIndex> steps;
  for (auto it = loop.steps.rbegin(); it != loop.steps.rend(); ++it) steps.push_back(-*it);
  return g.loop_from_steps(steps);
}

std::vector<LoopSpec> unit_direction_loops(const TorusGraph& g) {
  const int m = g.config().dim;
  std::vector<LatticeIndex> units;
  for (int a = 0; a < m; ++a) {
    units.push_back(LatticeIndex::unit(m, a, 1));
    units.push_back(LatticeIndex::unit(m, a, -1));
  }
  std::sort(units.begin(), units.end());

  std::vector<LoopSpec> out;
  std::set<std::vector<std::uint32_t>> seen;
  LatticeIndex k(m);
  for (int a = 0; a < m; ++a) k[a] = -1;
  while (true) {
    if (!is_zero(k)) {
      std::vector<LatticeIndex> steps;
      if (norm2(k) == 1) {
        const auto l = std::find_if(units.begin(), units.end(),
                                    [&](const LatticeIndex& u) { return dot(u, k) == 0; });
        steps = {k + *l, k - *l};
      } else {
        int axis = m - 1;
        while (k[axis] == 0) --axis;
        const LatticeIndex u = LatticeIndex::unit(m, axis, k[axis]);
        steps = {k - u, u};
      }
      LoopSpec loop = canonical_rotation(g, g.loop_from_steps(steps));
      if (seen.insert(loop.vertex_ids).second) out.push_back(std::move(loop));
    }
    int a = 0;
    for (; a < m; ++a) {
      if (++k[a] <= 1) break;
      k[a] = -1;
    }
    if (a == m) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hull estimate

RotationSetEstimate estimate_admissible_hull(const TorusGraph& g, int max_len, std::size_t budget,
                                             const OrbitOptions& opts) {
  const auto& cfg = g.config();
  RotationSetEstimate est;
  est.max_len = max_len;
  est.budget = budget;
  est.bounds = analytic_lower_bounds(cfg);

  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& ids : enumerate_cycles(g, max_len, budget)) {
    est.loops.push_back(g.loop_from_ids(ids));
    seen.insert(ids);
  }
  est.truncated = est.loops.size() >= budget;
  for (auto& loop : unit_direction_loops(g))
    if (seen.insert(loop.vertex_ids).second) est.loops.push_back(std::move(loop));

  est.loop_lengths.assign(est.loops.size(), 0.0);
  est.loop_residuals.assign(est.loops.size(), 0.0);
  std::vector<bool> solved(est.loops.size(), false);
  for (std::size_t i = 0; i < est.loops.size(); ++i) {
    try {
      const PeriodicOrbit orbit = solve_periodic_orbit(est.loops[i], cfg, opts);
      est.points.push_back({orbit.rotation_vector, i, false});
      est.loop_lengths[i] = orbit.length;
      est.loop_residuals[i] = orbit.residual;
      solved[i] = true;
    } catch (const Error& e) {
      est.failures.push_back({i, e.code(), e.what()});
    }
  }
  const std::size_t direct = est.points.size();
  for (std::size_t p = 0; p < direct; ++p) {
    const std::size_t i = est.points[p].loop;
    const LoopSpec rev = canonical_rotation(g, reversed_loop(g, est.loops[i]));
    if (!seen.count(rev.vertex_ids)) est.points.push_back({-est.points[p].w, i, true});
  }
  if (est.points.empty()) fail(ErrorCode::kSolver, "no loop produced a periodic orbit");

  std::vector<Vec> ws;
  for (const auto& p : est.points) ws.push_back(p.w);
  est.hull = ConvexHull::build(ws);
  est.inscribed_radius = est.hull.inscribed_radius();
  return est;
}

}  // namespace rotset
