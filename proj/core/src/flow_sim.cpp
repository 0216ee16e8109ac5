#include "rotset/flow_sim.hpp"

#include <limits>
#include <numeric>

namespace rotset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LatticeIndex nearest_lattice(const Vec& x) {
  LatticeIndex k(x.dim());
  for (int a = 0; a < x.dim(); ++a) k[a] = static_cast<int>(std::floor(x[a] + 0.5));
  return k;
}

Vec renormalized(const Vec& v) { return v * (1.0 / norm(v)); }

// Neighbourhood offsets {-1,0,1}^m, computed once per dimension.
const std::vector<LatticeIndex>& neighbour_offsets(int dim) {
  static thread_local std::array<std::vector<LatticeIndex>, kMaxDim + 1> cache;
  auto& out = cache[static_cast<std::size_t>(dim)];
  if (!out.empty()) return out;
  LatticeIndex k(dim);
  for (int a = 0; a < dim; ++a) k[a] = -1;
  while (true) {
    out.push_back(k);
    int a = 0;
    for (; a < dim; ++a) {
      if (++k[a] <= 1) break;
      k[a] = -1;
    }
    if (a == dim) break;
  }
  return out;
}

struct Hit {
  double t = kInf;
  LatticeIndex cell;
  Vec normal;
};

StepResult torus_advance(const FlowState& s, const BilliardConfig& cfg, double horizon,
                         const std::optional<LatticeIndex>& skip) {
  StepResult out;
  out.state = s;
  const double remaining = horizon - s.time;
  if (!(remaining > 0.0)) return out;

  const int m = cfg.dim;
  const Vec& p = s.position;
  const Vec& v = s.velocity;
  const Ray ray{p, v};

  LatticeIndex cell = nearest_lattice(p);
  std::array<double, kMaxDim> t_next{};
  std::array<double, kMaxDim> t_delta{};
  std::array<int, kMaxDim> step{};
  for (int a = 0; a < m; ++a) {
    if (v[a] > 0.0) {
      step[a] = 1;
      t_delta[a] = 1.0 / v[a];
      t_next[a] = (cell[a] + 0.5 - p[a]) / v[a];
    } else if (v[a] < 0.0) {
      step[a] = -1;
      t_delta[a] = -1.0 / v[a];
      t_next[a] = (cell[a] - 0.5 - p[a]) / v[a];
    } else {
      t_delta[a] = kInf;
      t_next[a] = kInf;
    }
  }

  Hit best;
  std::vector<LatticeIndex> grazed;
  const auto& offsets = neighbour_offsets(m);
  while (true) {
    for (const auto& off : offsets) {
      const LatticeIndex k = cell + off;
      if (skip && k == *skip) continue;
      const Ball ball = obstacle(k, cfg);
      const auto t = ray_ball_intersect(ray, ball);
      if (!t || *t >= best.t) continue;
      const Vec n = renormalized(p + v * *t - ball.center);
      if (std::abs(dot(v, n)) < tol::kGrazing) {
        if (std::find(grazed.begin(), grazed.end(), k) == grazed.end()) grazed.push_back(k);
        continue;
      }
      best = Hit{*t, k, n};
    }
    double t_exit = kInf;
    int axis = 0;
    for (int a = 0; a < m; ++a)
      if (t_next[a] < t_exit) {
        t_exit = t_next[a];
        axis = a;
      }
    if (best.t <= t_exit || t_exit >= remaining) break;
    cell[axis] += step[axis];
    t_next[axis] += t_delta[axis];
  }
  out.grazing = static_cast<long>(grazed.size());

  if (best.t <= remaining) {
    out.state.position = p + v * best.t;
    out.state.time = s.time + best.t;
    out.incidence = std::abs(dot(v, best.normal));
    out.state.velocity = renormalized(reflect_direction(v, best.normal));
    out.state.reflections = s.reflections + 1;
    out.kind = EventKind::kObstacle;
    out.obstacle = best.cell;
  } else {
    out.state.position = p + v * remaining;
    out.state.time = horizon;
    out.kind = EventKind::kHorizon;
  }
  out.state.cell = nearest_lattice(out.state.position);
  return out;
}

StepResult square_advance(const FlowState& s, const BilliardConfig& cfg, double horizon,
                          bool skip_obstacle) {
  StepResult out;
  out.state = s;
  const double remaining = horizon - s.time;
  if (!(remaining > 0.0)) return out;

  const Vec& p = s.position;
  const Vec& v = s.velocity;
  const Ball ball{cfg.center, cfg.radius};

  double t_obs = kInf;
  Vec n_obs;
  if (!skip_obstacle) {
    if (const auto t = ray_ball_intersect(Ray{p, v}, ball)) {
      const Vec n = renormalized(p + v * *t - ball.center);
      if (std::abs(dot(v, n)) < tol::kGrazing) {
        out.grazing = 1;
      } else {
        t_obs = *t;
        n_obs = n;
      }
    }
  }
  std::array<double, 2> t_wall{kInf, kInf};
  for (int a = 0; a < 2; ++a) {
    if (v[a] > 0.0) t_wall[a] = std::max(0.0, (0.5 - p[a]) / v[a]);
    if (v[a] < 0.0) t_wall[a] = std::max(0.0, (-0.5 - p[a]) / v[a]);
  }
  const double tw = std::min(t_wall[0], t_wall[1]);

  if (t_obs < tw && t_obs <= remaining) {
    out.state.position = p + v * t_obs;
    out.state.time = s.time + t_obs;
    out.incidence = std::abs(dot(v, n_obs));
    out.state.velocity = renormalized(reflect_direction(v, n_obs));
    out.state.reflections = s.reflections + 1;
    out.kind = EventKind::kObstacle;
    out.obstacle = s.cell;
    return out;
  }
  if (tw <= remaining) {
    const bool corner = std::abs(t_wall[0] - t_wall[1]) < tol::kCorner;
    out.state.position = p + v * tw;
    out.state.time = s.time + tw;
    for (int a = 0; a < 2; ++a) {
      if (!(corner || t_wall[a] == tw)) continue;
      const int sign = v[a] > 0.0 ? 1 : -1;
      out.state.position[a] = 0.5 * sign;
      // Mirrored cells run the other way in the unfolding.
      out.state.cell[a] += s.cell[a] % 2 == 0 ? sign : -sign;
      out.state.velocity[a] = -v[a];
    }
    out.state.velocity = renormalized(out.state.velocity);
    out.kind = corner ? EventKind::kCorner : EventKind::kWall;
    return out;
  }
  out.state.position = p + v * remaining;
  out.state.time = horizon;
  out.kind = EventKind::kHorizon;
  return out;
}

Vec mirror(const LatticeIndex& k, Vec x) {
  for (int a = 0; a < x.dim(); ++a)
    if (k[a] & 1) x[a] = -x[a];
  return x;
}

Vec lifted(const BilliardConfig& cfg, const FlowState& s) {
  return cfg.is_square() ? unfold(s.cell, s.position) : s.position;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kStart: return "start";
    case EventKind::kObstacle: return "obstacle";
    case EventKind::kWall: return "wall";
    case EventKind::kCorner: return "corner";
    case EventKind::kHorizon: return "horizon";
  }
  return "unknown";
}

Vec unfold(const LatticeIndex& k, const Vec& folded) { return to_vec(k) + mirror(k, folded); }

Vec unfold_direction(const LatticeIndex& k, const Vec& folded) { return mirror(k, folded); }

StepResult advance_to_next_event(const FlowState& s, const BilliardConfig& cfg, double horizon,
                                 const std::optional<LatticeIndex>& skip) {
  if (cfg.is_square()) return square_advance(s, cfg, horizon, skip.has_value());
  return torus_advance(s, cfg, horizon, skip);
}

FlowState make_state(const BilliardConfig& cfg, const Vec& position, const Vec& velocity) {
  FlowState s;
  s.position = position;
  s.velocity = velocity;
  s.cell = cfg.is_square() ? LatticeIndex(2) : nearest_lattice(position);
  return s;
}

TrajectoryRecord simulate(const BilliardConfig& cfg, const FlowState& initial, double t_max,
                          const SimulateOptions& opts) {
  cfg.validate();
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    fail(ErrorCode::kInvalidInput, "t_max must be positive and finite");
  if (initial.position.dim() != cfg.dim || initial.velocity.dim() != cfg.dim)
    fail(ErrorCode::kInvalidInput, "initial state dimension does not match the config");
  if (std::abs(norm(initial.velocity) - 1.0) > tol::kUnitInput)
    fail(ErrorCode::kInvalidInput, "initial velocity must be a unit vector");

  TrajectoryRecord rec;
  rec.geometry = cfg.geometry;
  FlowState s = initial;
  s.velocity = renormalized(initial.velocity);
  if (cfg.is_square()) {
    if (s.cell.dim() != 2) s.cell = LatticeIndex(2);
    for (int a = 0; a < 2; ++a)
      if (std::abs(s.position[a]) > 0.5 + tol::kGeom)
        fail(ErrorCode::kInvalidInput, "square start point outside [-1/2, 1/2]^2");
  } else {
    s.cell = nearest_lattice(s.position);
  }

  // The obstacle nearest to the start decides boundary starts.
  std::optional<LatticeIndex> skip;
  {
    const LatticeIndex k = cfg.is_square() ? s.cell : nearest_lattice(s.position);
    const Vec c = cfg.is_square() ? cfg.center : obstacle_center(k, cfg);
    const double d = norm(s.position - c);
    if (d < cfg.radius - tol::kHit) fail(ErrorCode::kInvalidInput, "start point inside obstacle");
    if (d <= cfg.radius + tol::kHit) {
      if (dot(s.velocity, s.position - c) < 0.0)
        fail(ErrorCode::kInvalidInput, "start velocity points into the obstacle");
      rec.itinerary.push_back(k);
      skip = k;
    }
  }
  rec.initial = s;
  if (opts.record_events) rec.events.push_back({s.time, s.position, s.cell, EventKind::kStart});

  long events = 0;
  while (s.time < t_max && events < opts.max_events) {
    const StepResult step = advance_to_next_event(s, cfg, t_max, skip);
    ++events;
    s = step.state;
    rec.grazing_passes += step.grazing;
    rec.max_speed_error = std::max(rec.max_speed_error, std::abs(norm(s.velocity) - 1.0));
    skip.reset();
    switch (step.kind) {
      case EventKind::kObstacle:
        ++rec.obstacle_hits;
        rec.min_incidence = std::min(rec.min_incidence, step.incidence);
        rec.itinerary.push_back(*step.obstacle);
        skip = step.obstacle;
        break;
      case EventKind::kWall: ++rec.wall_hits; break;
      case EventKind::kCorner: ++rec.corner_hits; break;
      default: break;
    }
    if (opts.record_events) rec.events.push_back({s.time, s.position, s.cell, step.kind});
    if (step.kind == EventKind::kHorizon) break;
  }
  rec.final = s;
  rec.displacement = lifted(cfg, s) - lifted(cfg, rec.initial);
  return rec;
}

Vec empirical_rotation(const TrajectoryRecord& rec) {
  const double t = rec.final.time - rec.initial.time;
  if (!(t > 0.0)) fail(ErrorCode::kInvalidInput, "empirical rotation needs positive elapsed time");
  return rec.displacement * (1.0 / t);
}

AdmissibleType itinerary_type(const TrajectoryRecord& rec) {
  AdmissibleType t;
  if (rec.itinerary.empty()) return t;
  LatticeIndex base = rec.itinerary.front();
  if (rec.geometry == GeometryKind::kSquareUnfold) base = base - zeta(base);
  for (const auto& k : rec.itinerary) t.cells.push_back(k - base);
  return t;
}

std::vector<LatticeIndex> free_flight_directions(const BilliardConfig& cfg) {
  cfg.validate();
  if (cfg.dim != 2)
    fail(ErrorCode::kNotImplemented, "free flight directions are enumerated for m = 2 only");
  const double bound = 1.0 / (2.0 * cfg.radius);
  const int box = static_cast<int>(std::floor(bound));
  std::vector<LatticeIndex> out;
  for (int p = 0; p <= box; ++p)
    for (int q = -box; q <= box; ++q) {
      if (p == 0 && q <= 0) continue;
      if (std::gcd(p, q) != 1) continue;
      if (static_cast<double>(p * p + q * q) > bound * bound + 1e-12) continue;
      out.push_back(LatticeIndex{p, q});
    }
  std::sort(out.begin(), out.end());
  return out;
}

Vec channel_midline_point(const LatticeIndex& d) {
  if (d.dim() != 2 || is_zero(d))
    fail(ErrorCode::kInvalidInput, "channel direction must be a nonzero planar vector");
  const double n2 = static_cast<double>(norm2(d));
  return Vec{-d[1] / (2.0 * n2), d[0] / (2.0 * n2)};
}

}  // namespace rotset
