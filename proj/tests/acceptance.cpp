// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>

#include "oracles.hpp"
#include "rotset/flow_sim.hpp"
#include "rotset/rotation_set.hpp"
#include "rotset/square_rotation.hpp"
#include "rotset/tracking.hpp"

using namespace rotset;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure descriptions of a criterion.
class Check {
 public:
  // `what` is a string or a callable producing one (built on failure only).
  template <class Msg>
  void expect(bool ok, Msg&& what) {
    if (ok) return;
    pass_ = false;
    if (++failures_ > 3) return;
    msg_ << (msg_.tellp() > 0 ? "; " : "");
    if constexpr (std::is_invocable_v<Msg>)
      msg_ << what();
    else
      msg_ << what;
  }
  Outcome done(const std::string& summary) const {
    if (pass_) return {true, summary};
    std::ostringstream os;
    os << msg_.str();
    if (failures_ > 3) os << " (+" << failures_ - 3 << " more)";
    return {false, os.str()};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::ostringstream msg_;
};

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

struct Combo {
  int m;
  double r;
};
const Combo kDesk[] = {{2, 0.05}, {2, 0.1}, {2, 0.2}, {3, 0.05}, {3, 0.1}, {3, 0.2}};

std::string label(const Combo& c) { return "m=" + std::to_string(c.m) + " r=" + fmt(c.r); }

Vec random_unit(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec v(m);
  for (int a = 0; a < m; ++a) v[a] = g(rng);
  return normalized(v);
}

Outcome graph_laws() {
  Check c;
  std::size_t pairs = 0;
  for (const auto& combo : kDesk) {
    const auto g = TorusGraph::build(BilliardConfig::torus(combo.m, combo.r));
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> neg(n);
    for (std::size_t a = 0; a < n; ++a) {
      const auto na = g.index_of(-g.vertex(a));
      c.expect(na.has_value(), [&] { return label(combo) + " vertices not closed under negation"; });
      if (!na) return c.done("");
      neg[a] = *na;
    }
    for (std::size_t a = 0; a < n; ++a) {
      c.expect(!g.has_edge(a, a), [&] { return label(combo) + " self edge"; });
      for (std::size_t b = 0; b < n; ++b) {
        const bool e = g.has_edge(a, b);
        c.expect(e == g.has_edge(b, a), [&] { return label(combo) + " edge asymmetry"; });
        c.expect(e == g.has_edge(neg[a], neg[b]), [&] { return label(combo) + " negation asymmetry"; });
        if (!e) c.expect(dot(g.vertex(a), g.vertex(b)) > 0, [&] { return label(combo) + " non-acute pair without edge"; });
        const auto path = connect_via_unit(g.vertex(a), g.vertex(b), g);
        bool ok = path.size() >= 2 && path.size() <= 4 && path.front() == g.vertex(a) && path.back() == g.vertex(b);
        for (std::size_t i = 0; ok && i + 1 < path.size(); ++i) ok = g.has_edge(path[i], path[i + 1]);
        c.expect(ok, [&] { return label(combo) + " connect " + to_string(g.vertex(a)) + " -> " + to_string(g.vertex(b)); });
        ++pairs;
      }
    }
    LatticeIndex k(combo.m);
    for (int a = 0; a < combo.m; ++a) k[a] = -1;
    while (true) {
      if (!is_zero(k)) c.expect(g.index_of(k).has_value(), [&] { return label(combo) + " missing " + to_string(k); });
      int a = 0;
      while (a < combo.m && ++k[a] > 1) k[a++] = -1;
      if (a == combo.m) break;
    }
  }
  return c.done("6 graphs, " + std::to_string(pairs) + " ordered vertex pairs connected in <= 3 steps");
}

Outcome betweenness_oracle() {
  Check c;
  std::size_t total = 0;
  for (const auto& combo : kDesk) {
    const auto g = TorusGraph::build(BilliardConfig::torus(combo.m, combo.r));
    const auto want = oracle::torus_graph(combo.m, combo.r, g.max_norm(), false);
    std::set<oracle::Key> verts;
    for (const auto& v : g.vertices()) verts.insert(oracle::key_of(v));
    c.expect(verts == want.vertices, [&] { return label(combo) + " vertex sets differ"; });
    std::vector<oracle::Key> keys;
    for (const auto& v : g.vertices()) keys.push_back(oracle::key_of(v));
    std::size_t mismatched = 0;
    for (std::size_t a = 0; a < keys.size(); ++a)
      for (std::size_t b = 0; b < keys.size(); ++b) {
        mismatched += g.has_edge(a, b) != oracle::torus_edge(keys[a], keys[b], combo.r);
      }
    c.expect(mismatched == 0, [&] { return label(combo) + " " + std::to_string(mismatched) + " edge mismatches"; });
    total += g.edge_count();
  }
  return c.done("6 (m, r) combinations, " + std::to_string(total) + " edges identical");
}

Outcome solver_laws() {
  Check c;
  std::mt19937_64 rng(101);
  double worst_res = 0;
  double worst_bd = 0;
  double worst_ms = 0;
  std::size_t solved = 0;
  for (const auto& [m, r, len] : {std::tuple{2, 0.2, 3}, std::tuple{2, 0.1, 2}, std::tuple{3, 0.2, 2}}) {
    const auto cfg = BilliardConfig::torus(m, r);
    const auto g = TorusGraph::build(cfg);
    for (const auto& loop : enumerate_loops(g, len, 300)) {
      const auto o = solve_periodic_orbit(loop, cfg);
      ++solved;
      worst_res = std::max(worst_res, o.residual);
      worst_bd = std::max(worst_bd, o.boundary_error);
      c.expect(o.residual < 1e-9, "residual " + fmt(o.residual));
      c.expect(o.boundary_error < 1e-12, "boundary error " + fmt(o.boundary_error));
      c.expect(o.descent.monotone, "length increased by " + fmt(o.descent.max_increase));
      c.expect(o.min_clearance >= r - 1e-9, "clearance " + fmt(o.min_clearance));
      if (solved % 5 != 0) continue;
      OrbitOptions opts;
      const auto type = loop.to_type();
      for (int n = 0; n < type.period(); ++n)
        opts.initial.push_back(to_vec(type.cells[static_cast<std::size_t>(n)]) + random_unit(m, rng) * r);
      const auto again = solve_periodic_orbit(loop, cfg, opts);
      double d = std::abs(again.length - o.length);
      for (std::size_t i = 0; i < o.points.size(); ++i) d = std::max(d, norm(again.points[i] - o.points[i]));
      worst_ms = std::max(worst_ms, d);
      c.expect(d < 1e-8, "multi-start disagreement " + fmt(d));
    }
  }
  return c.done(std::to_string(solved) + " orbits, max residual " + fmt(worst_res, 3) + ", max boundary error " +
                fmt(worst_bd, 3) + ", max multi-start gap " + fmt(worst_ms, 3));
}

Outcome bounce_orbit() {
  const auto cfg = BilliardConfig::torus(2, 0.2);
  const auto g = TorusGraph::build(cfg);
  const auto o = solve_periodic_orbit(g.loop_from_steps({LatticeIndex{1, 0}, LatticeIndex{-1, 0}}), cfg);
  Check c;
  c.expect(std::abs(o.length - 1.2) <= 1e-10, "length " + fmt(o.length, 17));
  c.expect(norm(o.rotation_vector) <= 1e-10, "rotation " + to_string(o.rotation_vector));
  return c.done("length " + fmt(o.length, 17) + ", rotation " + to_string(o.rotation_vector));
}

Outcome zigzag_speed() {
  const auto cfg = BilliardConfig::torus(2, 0.2);
  const auto g = TorusGraph::build(cfg);
  const auto o = solve_periodic_orbit(g.loop_from_steps({LatticeIndex{1, 1}, LatticeIndex{1, -1}}), cfg);
  const double t = o.rotation_vector[0];
  Check c;
  c.expect(t > std::sqrt(0.5), "t = " + fmt(t, 10));
  c.expect(std::abs(o.rotation_vector[1]) < 1e-12, "off-axis component " + fmt(o.rotation_vector[1]));
  return c.done("t = " + fmt(t, 10) + ", margin over sqrt(2)/2 " + fmt(t - std::sqrt(0.5), 6));
}

Outcome constrained_spread() {
  const double r = 0.2;
  const auto cfg = BilliardConfig::torus(2, r);
  const auto g = TorusGraph::build(cfg);
  const auto type = path_to_type(g, {LatticeIndex{1, 0}, LatticeIndex{1, 1}, LatticeIndex{-1, 2}});
  std::mt19937_64 rng(23);
  double lo = 1e300;
  double hi = 0;
  Check c;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x0 = to_vec(type.cells.front()) + random_unit(2, rng) * r;
    const Vec xs = to_vec(type.cells.back()) + random_unit(2, rng) * r;
    const auto p = solve_constrained_path(type, x0, xs, cfg);
    c.expect(p.residual < 1e-9, "path residual " + fmt(p.residual));
    lo = std::min(lo, p.length);
    hi = std::max(hi, p.length);
  }
  c.expect(hi - lo <= 4 * r, "spread " + fmt(hi - lo));
  return c.done("type of 4 cells, spread " + fmt(hi - lo) + " <= " + fmt(4 * r));
}

Outcome hull_vs_bounds() {
  const auto g = TorusGraph::build(BilliardConfig::torus(2, 0.2));
  const auto e = estimate_admissible_hull(g, 4, 100000);
  const auto ob = outer_bound(g, 64);
  const double dim_radius = std::sqrt(2.0 / (std::log(2.0) + 5.0));
  double max_norm = 0;
  for (const auto& p : e.points) max_norm = std::max(max_norm, norm(p.w));
  Check c;
  c.expect(e.failures.empty(), std::to_string(e.failures.size()) + " loop failures");
  c.expect(e.inscribed_radius >= 0.65, "inscribed radius " + fmt(e.inscribed_radius));
  c.expect(std::abs(e.bounds.dimension_radius - 0.59271) <= 1e-5 &&
               std::abs(e.bounds.dimension_radius - dim_radius) <= 1e-6,
           "dimension radius " + fmt(e.bounds.dimension_radius, 10));
  c.expect(e.inscribed_radius >= e.bounds.dimension_radius, "below dimension radius");
  c.expect(max_norm < 1.0, "point norm " + fmt(max_norm));
  c.expect(max_norm <= ob.a + 1e-9, "point norm " + fmt(max_norm, 10) + " above outer " + fmt(ob.a, 10));
  return c.done(std::to_string(e.points.size()) + " points, inscribed radius " + fmt(e.inscribed_radius) +
                " >= 0.65 and >= " + fmt(e.bounds.dimension_radius) + ", max norm " + fmt(max_norm) +
                " <= a = " + fmt(ob.a, 8));
}

Outcome eta_suite() {
  Check c;
  c.expect(eta(kSmallRadius) < M_PI / 2, "eta(sqrt2/4) = " + fmt(eta(kSmallRadius)));
  double worst = 0;
  for (double r = 0.01; r <= kSmallRadius; r += 0.01) {
    c.expect(eta(r) < std::sqrt(2.0) * M_PI * r, "eta above sqrt2 pi r at r = " + fmt(r));
    const int n = eta_terms_needed(r, 1e-12);
    const double d = std::abs(eta_partial(r, 2 * n) - eta_partial(r, n));
    worst = std::max(worst, d);
    c.expect(d < 1e-12, "doubling changes eta by " + fmt(d) + " at r = " + fmt(r));
  }
  return c.done("eta(sqrt2/4) = " + fmt(eta(kSmallRadius), 8) + " < pi/2, max doubling change " + fmt(worst, 3));
}

Outcome tracking() {
  const auto cfg = BilliardConfig::torus(2, 0.2);
  const auto g = TorusGraph::build(cfg);
  const auto base = make_tracking_base(g, unit_direction_loops(g), LatticeIndex{1, 0});
  const Vec u{0.3, 0.1};
  const double T = 1000.0;
  const auto run = generate_tracking_path(u, base, T, cfg);
  Check c;
  for (std::size_t n = 0; n < run.drift.size(); ++n)
    c.expect(run.drift[n] <= run.declared_M, "drift " + fmt(run.drift[n]) + " at t = " + fmt(run.times[n]));
  const double err = norm(run.empirical_rotation - u);
  c.expect(err <= 2 * run.declared_M / T, "rotation error " + fmt(err));
  c.expect(is_admissible(run.type, cfg), "tracking itinerary not admissible");
  return c.done("max drift " + fmt(run.deviation_sup) + " <= M = " + fmt(run.declared_M) + ", rotation error " +
                fmt(err) + " <= 2M/T = " + fmt(2 * run.declared_M / T));
}

Outcome square_endpoints() {
  Check c;
  const auto cfg = BilliardConfig::square(0.2);
  const double quarter = std::sqrt(2.0) / 4;
  const auto diamond = simulate(cfg, diamond_orbit_start(), 100 * diamond_period());
  const double rd = winding_rotation(diamond, cfg);
  c.expect(std::abs(rd - quarter) <= 1e-9, "diamond rotation number " + fmt(rd, 12));

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst = 0;
  int starts = 0;
  while (starts < 20) {
    const Vec x{u(rng), u(rng)};
    if (norm(x) <= 0.2 + 1e-6) continue;
    const double a = u(rng) * 2 * M_PI;
    SimulateOptions opts;
    const auto rec = simulate(cfg, make_state(cfg, x, Vec{std::cos(a), std::sin(a)}), 1000.0, opts);
    const double rho = winding_rotation(rec, cfg);
    worst = std::max(worst, std::abs(rho));
    c.expect(std::abs(rho) <= quarter + 0.01, "random rotation number " + fmt(rho));
    ++starts;
  }
  const auto coarse = square_ar_interval(SquareGraph::build(BilliardConfig::square(0.2)), 2, 100000);
  const auto fine = square_ar_interval(SquareGraph::build(BilliardConfig::square(0.05)), 2, 100000);
  c.expect(coarse.v < quarter, "v(0.2) = " + fmt(coarse.v));
  c.expect(fine.v < quarter, "v(0.05) = " + fmt(fine.v));
  c.expect(fine.v > coarse.v, "v(0.05) = " + fmt(fine.v) + " not above v(0.2) = " + fmt(coarse.v));
  return c.done("diamond " + fmt(rd, 12) + ", max random |rho| " + fmt(worst) + ", v(0.2) = " + fmt(coarse.v) +
                " < v(0.05) = " + fmt(fine.v) + " < sqrt(2)/4");
}

Outcome free_flight() {
  const auto cfg = BilliardConfig::torus(2, 0.2);
  const auto dirs = free_flight_directions(cfg);
  std::set<LatticeIndex> got(dirs.begin(), dirs.end());
  const std::set<LatticeIndex> want{LatticeIndex{1, 0}, LatticeIndex{0, 1},  LatticeIndex{1, 1},
                                    LatticeIndex{1, -1}, LatticeIndex{2, 1}, LatticeIndex{1, 2},
                                    LatticeIndex{2, -1}, LatticeIndex{1, -2}};
  Check c;
  c.expect(got == want, "direction set has " + std::to_string(got.size()) + " elements");
  for (const auto& d : dirs) {
    const Vec p = channel_midline_point(d);
    SimulateOptions opts;
    opts.record_events = false;
    const auto rec = simulate(cfg, make_state(cfg, p, normalized(to_vec(d))), 1000.0, opts);
    c.expect(rec.obstacle_hits == 0, to_string(d) + " hit " + std::to_string(rec.obstacle_hits) + " obstacles");
    c.expect(oracle::line_clearance(p, to_vec(d), 1000.0) > cfg.radius, to_string(d) + " line meets an obstacle");
  }
  return c.done(std::to_string(dirs.size()) + " directions, each reflection-free for t = 1000");
}

Outcome physics() {
  Check c;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double speed = 0;
  double back_err = 0;
  int itineraries = 0;
  int inadmissible = 0;
  int segments = 0;
  int far = 0;
  long most_events = 0;
  for (const auto& [m, r] : {std::pair{2, 0.2}, std::pair{3, 0.2}, std::pair{2, 0.1}}) {
    const auto cfg = BilliardConfig::torus(m, r);
    for (int it = 0; it < 10; ++it) {
      Vec x(m);
      for (int a = 0; a < m; ++a) x[a] = u(rng);
      if (norm(x) <= r + 1e-3) continue;
      const Vec v = random_unit(m, rng);
      const auto rec = simulate(cfg, make_state(cfg, x, v), 200.0);
      speed = std::max(speed, rec.max_speed_error);
      c.expect(rec.max_speed_error <= 1e-12, "speed error " + fmt(rec.max_speed_error));
      if (rec.itinerary.size() >= 2 && rec.grazing_passes == 0 && rec.min_incidence >= 1e-6) {
        ++itineraries;
        inadmissible += !is_admissible(itinerary_type(rec), cfg);
      }
      const auto seg = simulate(cfg, make_state(cfg, x, v), 10.0);
      if (static_cast<long>(seg.events.size()) > 50) continue;
      const auto back = simulate(cfg, make_state(cfg, seg.final.position, seg.final.velocity * -1.0), 10.0);
      const double e = norm(back.final.position - x);
      ++segments;
      back_err = std::max(back_err, e);
      if (e > 1e-6) {
        ++far;
        most_events = std::max(most_events, seg.obstacle_hits);
      }
    }
  }
  c.expect(inadmissible == 0, std::to_string(inadmissible) + " of " + std::to_string(itineraries) +
                                  " tangency-free itineraries fail is_admissible");
  c.expect(far == 0, std::to_string(far) + " of " + std::to_string(segments) +
                         " reversed segments miss the start by more than 1e-6 (worst " + fmt(back_err, 3) +
                         ", up to " + std::to_string(most_events) + " reflections)");
  return c.done("max speed error " + fmt(speed, 3) + ", max reversal error " + fmt(back_err, 3) + ", " +
                std::to_string(itineraries) + " itineraries admissible");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"graph laws", graph_laws},
      {"betweenness oracle", betweenness_oracle},
      {"solver laws", solver_laws},
      {"bounce orbit", bounce_orbit},
      {"zigzag speed", zigzag_speed},
      {"constrained path spread", constrained_spread},
      {"hull vs analytic bounds", hull_vs_bounds},
      {"eta suite", eta_suite},
      {"tracking", tracking},
      {"square endpoints", square_endpoints},
      {"free flight", free_flight},
      {"simulator physics", physics},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d: %s (%s) %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
