// rotset: command-line front end for the rotation-set library.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "rotset/io.hpp"
#include "svg.hpp"

namespace rotset {
namespace {

struct Common {
  std::string config_path;
  std::string geometry;
  int dim = 2;
  double radius = 0.2;
  std::vector<double> center;
  double max_norm = 0.0;
  int max_len = 4;
  std::size_t budget = 100000;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  std::string svg;

  CLI::App* active = nullptr;
  std::string default_geometry = "torus";

  bool given(const std::string& flag) const {
    const CLI::Option* o = active ? active->get_option_no_throw(flag) : nullptr;
    return o != nullptr && o->count() > 0;
  }
};

void add_config_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--geometry", c.geometry, "torus or square")
      ->check(CLI::IsMember({"torus", "square"}));
  cmd->add_option("--dim", c.dim, "torus dimension m");
  cmd->add_option("--radius", c.radius, "obstacle radius r");
  cmd->add_option("--center", c.center, "square obstacle center X,Y")->delimiter(',')->expected(2);
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

void add_graph_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-norm", c.max_norm, "vertex norm bound");
}

BilliardConfig resolve_config(const Common& c) {
  Json j = Json::object();
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    try {
      in >> j;
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::kConfig, "config file '" + c.config_path + "' is not valid JSON: " + e.what());
    }
  }
  if (!c.geometry.empty()) j["geometry"] = c.geometry;
  if (!j.contains("geometry")) j["geometry"] = c.default_geometry;
  if (c.given("--dim")) j["dim"] = c.dim;
  if (c.given("--radius")) j["radius"] = c.radius;
  if (c.given("--center")) j["center"] = c.center;
  return config_from_json(j);
}

std::optional<double> max_norm_of(const Common& c) {
  if (c.given("--max-norm")) return c.max_norm;
  return std::nullopt;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) fail(ErrorCode::kConfig, "cannot write '" + c.out + "'");
  os << text;
}

void emit_json(const Common& c, const RunManifest& m, Json result) {
  Json doc{{"manifest", to_json(m)}, {"result", std::move(result)}};
  emit(c, doc.dump(2) + "\n");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::kConfig, "cannot write '" + path + "'");
  os << text;
}

RunManifest manifest(const std::string& command, const Common& c, const BilliardConfig& cfg,
                     Json parameters) {
  return {command, std::move(parameters), c.seed, cfg};
}

std::vector<LatticeIndex> parse_steps(const std::string& text, int dim) {
  std::vector<LatticeIndex> steps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    LatticeIndex k(dim);
    std::stringstream is(item);
    std::string v;
    int a = 0;
    while (std::getline(is, v, ',')) {
      if (a >= dim) fail(ErrorCode::kConfig, "loop step '" + item + "' has too many coordinates");
      try {
        std::size_t used = 0;
        k[a++] = std::stoi(v, &used);
        if (used != v.size() && v.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(v);
      } catch (const std::logic_error&) {
        fail(ErrorCode::kConfig, "loop step '" + item + "' is not an integer vector");
      }
    }
    if (a != dim) fail(ErrorCode::kConfig, "loop step '" + item + "' needs " + std::to_string(dim) + " coordinates");
    steps.push_back(k);
  }
  if (steps.empty()) fail(ErrorCode::kConfig, "--loop needs at least one step");
  return steps;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string v;
  while (std::getline(ss, v, ',')) {
    try {
      out.push_back(std::stod(v));
    } catch (const std::logic_error&) {
      fail(ErrorCode::kConfig, "'" + text + "' is not a comma-separated list of numbers");
    }
  }
  return out;
}

Json steps_json(const std::vector<LatticeIndex>& steps) {
  Json a = Json::array();
  for (const auto& s : steps) a.push_back(to_json(s));
  return a;
}

// Square loops are given as displacements taken from the parity class (0,0).
LoopSpec square_loop_from_steps(const SquareGraph& g, const std::vector<LatticeIndex>& steps) {
  std::vector<std::uint32_t> ids;
  LatticeIndex at(2);
  for (const auto& l : steps) {
    const ParityClass i = zeta(at);
    const auto id = g.index_of(SquareVertex{i, i + l});
    if (!id) fail(ErrorCode::kConfig, "step " + to_string(l) + " is not a vertex of the square graph");
    ids.push_back(static_cast<std::uint32_t>(*id));
    at = at + l;
  }
  return g.loop_from_ids(ids);
}

int cmd_graph(const Common& c) {
  const BilliardConfig cfg = resolve_config(c);
  Json params{{"max_norm", max_norm_of(c) ? Json(*max_norm_of(c)) : Json(nullptr)}};
  Json result;
  std::ostringstream text;
  if (cfg.is_torus()) {
    const TorusGraph g = TorusGraph::build(cfg, max_norm_of(c));
    std::size_t self = 0;
    bool symmetric = true;
    bool negation = true;
    for (std::size_t a = 0; a < g.vertex_count(); ++a) {
      if (g.has_edge(a, a)) ++self;
      const auto na = g.index_of(-g.vertex(a));
      if (!na) negation = false;
      for (const auto b : g.successors(a)) {
        symmetric = symmetric && g.has_edge(b, a);
        const auto nb = g.index_of(-g.vertex(b));
        negation = negation && na && nb && g.has_edge(*na, *nb);
      }
    }
    result = to_json(g);
    result["audit"] = {{"self_edges", self}, {"edge_symmetric", symmetric},
                       {"negation_symmetric", negation}};
    text << "vertices " << g.vertex_count() << "\nedges " << g.edge_count() << "\nself_edges "
         << self << "\nedge_symmetric " << symmetric << "\nnegation_symmetric " << negation
         << '\n';
    if (g.bound_binds())
      std::cerr << "warning: vertices found in the outermost shell; --max-norm may be binding\n";
  } else {
    const SquareGraph g = SquareGraph::build(cfg, max_norm_of(c));
    std::size_t self = 0;
    for (std::size_t a = 0; a < g.vertex_count(); ++a)
      if (g.has_edge(a, a)) ++self;
    result = to_json(g);
    result["audit"] = {{"self_edges", self}};
    text << "vertices " << g.vertex_count() << "\nedges " << g.edge_count() << "\nself_edges "
         << self << '\n';
    if (g.bound_binds())
      std::cerr << "warning: vertices found in the outermost shell; --max-norm may be binding\n";
  }
  if (c.format == "text") {
    emit(c, text.str());
  } else {
    emit_json(c, manifest("graph", c, cfg, params), std::move(result));
  }
  return 0;
}

int cmd_orbit(const Common& c, const std::string& loop) {
  const BilliardConfig cfg = resolve_config(c);
  const auto steps = parse_steps(loop, cfg.dim);
  OrbitOptions opts;
  opts.tol = c.tol;
  LoopSpec spec;
  if (cfg.is_torus()) {
    spec = TorusGraph::build(cfg, max_norm_of(c)).loop_from_steps(steps);
  } else {
    spec = square_loop_from_steps(SquareGraph::build(cfg, max_norm_of(c)), steps);
  }
  const PeriodicOrbit orbit = solve_periodic_orbit(spec, cfg, opts);
  Json result = to_json(orbit);
  if (cfg.is_square()) result["rotation_number"] = orbit_rotation_number(orbit, cfg);
  if (!c.svg.empty()) {
    std::vector<Vec> pts = orbit.points;
    pts.push_back(orbit.points.front() + orbit.displacement);
    if (cfg.is_torus()) {
      write_file(c.svg, svg::orbit_plot(pts, cfg, "length " + format_double(orbit.length)));
    } else {
      write_file(c.svg, svg::square_plot(fold_polyline(pts), cfg,
                                         "winding " + format_double(orbit_rotation_number(orbit, cfg) * orbit.length)));
    }
  }
  emit_json(c, manifest("orbit", c, cfg, {{"loop", steps_json(steps)}, {"tol", c.tol}}),
            std::move(result));
  return 0;
}

int cmd_hull(const Common& c, int samples) {
  const BilliardConfig cfg = resolve_config(c);
  if (!cfg.is_torus()) fail(ErrorCode::kConfig, "hull estimates the torus rotation set; use 'square'");
  const TorusGraph g = TorusGraph::build(cfg, max_norm_of(c));
  OrbitOptions opts;
  opts.tol = c.tol;
  const RotationSetEstimate e = estimate_admissible_hull(g, c.max_len, c.budget, opts);
  Json result = to_json(e);
  double max_norm = 0.0;
  for (const auto& p : e.points) max_norm = std::max(max_norm, norm(p.w));
  result["max_point_norm"] = max_norm;
  int status = 0;
  if (cfg.dim <= 3) {
    const OuterBound ob = outer_bound(g, samples);
    result["outer_bound"] = to_json(ob);
    if (max_norm > ob.a + 1e-9) {
      std::cerr << "invariant: hull point norm " << max_norm << " exceeds outer bound " << ob.a << '\n';
      status = 4;
    }
  }
  if (max_norm >= 1.0) {
    std::cerr << "invariant: hull point norm " << max_norm << " is not below 1\n";
    status = 4;
  }
  if (!c.svg.empty()) {
    std::vector<double> circles{e.bounds.best};
    write_file(c.svg, svg::hull_plot(e, circles));
  }
  emit_json(c,
            manifest("hull", c, cfg,
                     {{"max_len", c.max_len}, {"budget", c.budget}, {"tol", c.tol},
                      {"samples", samples}}),
            std::move(result));
  return status;
}

int cmd_bounds(const Common& c, int samples) {
  const BilliardConfig cfg = resolve_config(c);
  const AnalyticBounds b = analytic_lower_bounds(cfg);
  Json result{{"lower", to_json(b)}};
  std::ostringstream text;
  text.precision(10);
  text << "eta " << b.eta << "\ndimension_radius " << b.dimension_radius << "\neta_radius "
       << b.eta_radius << '\n';
  if (b.lattice_angle_radius)
    text << "lattice_angle_radius " << *b.lattice_angle_radius << " (N = " << *b.n << ")\n";
  else
    text << "lattice_angle_radius undefined\n";
  text << "best_lower " << b.best << '\n';
  if (cfg.dim <= 3) {
    const TorusGraph g = TorusGraph::build(cfg, max_norm_of(c));
    const OuterBound ob = outer_bound(g, samples);
    result["outer"] = to_json(ob);
    text << "outer c1 " << ob.c1 << " c2 " << ob.c2 << " alpha " << ob.alpha << " a " << ob.a
         << '\n';
  }
  if (c.format == "text") {
    emit(c, text.str());
  } else {
    emit_json(c, manifest("bounds", c, cfg, {{"samples", samples}}), std::move(result));
  }
  return 0;
}

FlowState random_start(const BilliardConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec x(cfg.dim);
  const Vec center = cfg.is_torus() ? Vec::zero(cfg.dim) : cfg.center;
  do {
    for (int a = 0; a < cfg.dim; ++a) x[a] = unif(rng);
  } while (norm(x - center) <= cfg.radius + 1e-6);
  Vec v(cfg.dim);
  do {
    for (int a = 0; a < cfg.dim; ++a) v[a] = gauss(rng);
  } while (norm(v) < 1e-6);
  return make_state(cfg, x, normalized(v));
}

int cmd_simulate(const Common& c, const std::string& init, double tmax, int batch) {
  const BilliardConfig cfg = resolve_config(c);
  if (!(tmax > 0.0)) fail(ErrorCode::kConfig, "--tmax must be positive");
  std::vector<FlowState> starts;
  if (!init.empty()) {
    const auto vals = parse_reals(init);
    if (static_cast<int>(vals.size()) != 2 * cfg.dim)
      fail(ErrorCode::kConfig, "--init needs " + std::to_string(2 * cfg.dim) + " numbers (position, velocity)");
    Vec x(cfg.dim), v(cfg.dim);
    for (int a = 0; a < cfg.dim; ++a) {
      x[a] = vals[static_cast<std::size_t>(a)];
      v[a] = vals[static_cast<std::size_t>(cfg.dim + a)];
    }
    if (std::abs(norm(v) - 1.0) > 1e-9) v = normalized(v);
    starts.push_back(make_state(cfg, x, v));
  } else {
    std::mt19937_64 rng(c.seed);
    for (int i = 0; i < std::max(batch, 1); ++i) starts.push_back(random_start(cfg, rng));
  }

  Json params{{"tmax", tmax}, {"batch", starts.size()}};
  if (!init.empty()) params["init"] = init;
  SimulateOptions opts;
  opts.record_events = c.format == "csv" || !c.svg.empty() || cfg.is_square();
  std::vector<TrajectoryRecord> recs;
  for (const auto& s : starts) recs.push_back(simulate(cfg, s, tmax, opts));

  if (!c.svg.empty() && cfg.dim == 2) {
    const auto& rec = recs.front();
    std::vector<Vec> pts;
    for (const auto& e : rec.events) pts.push_back(e.position);
    if (cfg.is_square()) {
      write_file(c.svg, svg::square_plot(pts, cfg, "winding " + format_double(winding_displacement(rec, cfg))));
    } else {
      write_file(c.svg, svg::orbit_plot(pts, cfg, "t = " + format_double(tmax)));
    }
  }

  if (c.format == "csv") {
    std::ostringstream os;
    os << "# " << to_json(manifest("simulate", c, cfg, params)).dump() << '\n';
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (recs.size() > 1) os << "# trajectory " << i << '\n';
      write_trajectory_csv(os, recs[i]);
    }
    emit(c, os.str());
    return 0;
  }
  Json runs = Json::array();
  for (const auto& rec : recs) {
    Json j = trajectory_summary(rec);
    if (cfg.is_square()) j["rotation_number"] = winding_rotation(rec, cfg);
    runs.push_back(std::move(j));
  }
  emit_json(c, manifest("simulate", c, cfg, params), {{"trajectories", runs}});
  return 0;
}

int cmd_square(const Common& c) {
  const BilliardConfig cfg = resolve_config(c);
  if (!cfg.is_square()) fail(ErrorCode::kConfig, "the square command needs the square geometry");
  const SquareGraph g = SquareGraph::build(cfg, max_norm_of(c));
  OrbitOptions opts;
  opts.tol = c.tol;
  const SquareInterval s = square_ar_interval(g, c.max_len, c.budget, opts);
  Json result = to_json(s);
  result["upper_limit"] = std::numbers::sqrt2 / 4.0;
  int status = 0;
  if (!(s.v < std::numbers::sqrt2 / 4.0)) {
    std::cerr << "invariant: interval endpoint " << s.v << " is not below sqrt(2)/4\n";
    status = 4;
  }
  if (!c.svg.empty() && !s.loops.empty()) {
    const auto best = std::max_element(s.loops.begin(), s.loops.end(), [](const auto& a, const auto& b) {
      return std::abs(a.rotation_number) < std::abs(b.rotation_number);
    });
    const PeriodicOrbit orbit = solve_periodic_orbit(best->loop, cfg, opts);
    std::vector<Vec> pts = orbit.points;
    pts.push_back(orbit.points.front() + orbit.displacement);
    write_file(c.svg, svg::square_plot(fold_polyline(pts), cfg,
                                       "rotation number " + format_double(best->rotation_number)));
  }
  emit_json(c,
            manifest("square", c, cfg, {{"max_len", c.max_len}, {"budget", c.budget}, {"tol", c.tol}}),
            std::move(result));
  return status;
}

int cmd_track(const Common& c, const std::string& target, double T, int repeat) {
  const BilliardConfig cfg = resolve_config(c);
  if (!cfg.is_torus()) fail(ErrorCode::kConfig, "tracking is implemented for the torus");
  const auto vals = parse_reals(target);
  if (static_cast<int>(vals.size()) != cfg.dim)
    fail(ErrorCode::kConfig, "--target needs " + std::to_string(cfg.dim) + " numbers");
  Vec u(cfg.dim);
  for (int a = 0; a < cfg.dim; ++a) u[a] = vals[static_cast<std::size_t>(a)];
  const TorusGraph g = TorusGraph::build(cfg, max_norm_of(c));
  TrackingOptions opts;
  opts.repeat = repeat;
  opts.orbit.tol = c.tol;
  const auto base = make_tracking_base(g, unit_direction_loops(g), LatticeIndex::unit(cfg.dim, 0), opts);
  const TrackingRun run = generate_tracking_path(u, base, T, cfg, opts);
  const double rot_err = norm(run.empirical_rotation - u);
  Json result = to_json(run);
  result["rotation_error"] = rot_err;
  result["rotation_error_bound"] = 2.0 * run.declared_M / run.total_time;
  emit_json(c, manifest("track", c, cfg, {{"target", to_json(u)}, {"T", T}, {"repeat", repeat}, {"tol", c.tol}}),
            std::move(result));
  if (!run.bound_holds) {
    std::cerr << "invariant: drift " << run.deviation_sup << " exceeds declared M " << run.declared_M << '\n';
    return 4;
  }
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSolver: return 3;
    case ErrorCode::kInvariant: return 4;
    default: return 2;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Rotation sets of billiards with a small ball obstacle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  Common c;
  std::string loop;
  std::string init;
  std::string target = "0.3,0.1";
  double tmax = 1000.0;
  double T = 1000.0;
  int batch = 1;
  int samples = 64;
  int repeat = 6;

  auto* graph = app.add_subcommand("graph", "build and export the transition graph");
  add_config_flags(graph, c);
  add_graph_flags(graph, c);
  graph->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* orbit = app.add_subcommand("orbit", "solve the periodic orbit of a loop");
  add_config_flags(orbit, c);
  add_graph_flags(orbit, c);
  orbit->add_option("--loop", loop, "loop steps, e.g. \"1,0;-1,0\"")->required();
  orbit->add_option("--tol", c.tol, "solver tolerance");
  orbit->add_option("--svg", c.svg, "SVG output (m = 2)");

  auto* hull = app.add_subcommand("hull", "estimate the admissible rotation set");
  add_config_flags(hull, c);
  add_graph_flags(hull, c);
  hull->add_option("--max-len", c.max_len, "maximal loop length");
  hull->add_option("--budget", c.budget, "maximal number of enumerated loops");
  hull->add_option("--tol", c.tol, "solver tolerance");
  hull->add_option("--samples", samples, "outer bound samples per circle");
  hull->add_option("--svg", c.svg, "SVG output (m = 2)");

  auto* bounds = app.add_subcommand("bounds", "analytic inner and outer bounds");
  add_config_flags(bounds, c);
  add_graph_flags(bounds, c);
  bounds->add_option("--samples", samples, "outer bound samples per circle");
  bounds->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* sim = app.add_subcommand("simulate", "simulate the billiard flow");
  add_config_flags(sim, c);
  sim->add_option("--init", init, "x,y,...,vx,vy,... (default: random from --seed)");
  sim->add_option("--tmax", tmax, "simulated time");
  sim->add_option("--seed", c.seed, "seed for random starts");
  sim->add_option("--batch", batch, "number of random starts");
  sim->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  sim->add_option("--svg", c.svg, "SVG of the first trajectory (m = 2)");

  auto* square = app.add_subcommand("square", "rotation interval of the square billiard");
  add_config_flags(square, c);
  add_graph_flags(square, c);
  auto* square_len = square->add_option("--max-len", c.max_len, "maximal loop length (default 2)");
  square->add_option("--budget", c.budget, "maximal number of enumerated loops");
  square->add_option("--tol", c.tol, "solver tolerance");
  square->add_option("--svg", c.svg, "SVG of the extremal orbit");

  auto* track = app.add_subcommand("track", "trajectory following a target rotation vector");
  add_config_flags(track, c);
  add_graph_flags(track, c);
  track->add_option("--target", target, "target rotation vector, e.g. 0.3,0.1");
  track->add_option("--T,-T", T, "minimal trajectory length");
  track->add_option("--repeat", repeat, "loop copies per base orbit");
  track->add_option("--tol", c.tol, "solver tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto* sub : app.get_subcommands()) c.active = sub;

  try {
    if (*graph) return cmd_graph(c);
    if (*orbit) return cmd_orbit(c, loop);
    if (*hull) return cmd_hull(c, samples);
    if (*bounds) return cmd_bounds(c, samples);
    if (*sim) {
      if (!c.given("--format")) c.format = "csv";
      return cmd_simulate(c, init, tmax, batch);
    }
    if (*square) {
      c.default_geometry = "square";
      if (!square_len->count()) c.max_len = 2;
      return cmd_square(c);
    }
    if (*track) return cmd_track(c, target, T, repeat);
  } catch (const Error& e) {
    std::cerr << Json{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}}.dump()
              << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace rotset

int main(int argc, char** argv) { return rotset::run(argc, argv); }
