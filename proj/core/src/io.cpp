#include "rotset/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

#ifndef ROTSET_VERSION
#define ROTSET_VERSION "0.0.0"
#endif

namespace rotset {

std::string_view library_version() { return ROTSET_VERSION; }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

template <class T>
T required_number(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number()) fail(ErrorCode::kConfig, std::string("config key '") + key + "' must be a number");
  return v.get<T>();
}

Json error_json(const LoopFailure& f) {
  return {{"loop", f.loop}, {"code", static_cast<int>(f.code)}, {"message", f.message}};
}

Json ids_json(const std::vector<std::uint32_t>& ids) { return Json(ids); }

Json loop_json(const LoopSpec& l) {
  Json steps = Json::array();
  for (const auto& s : l.steps) steps.push_back(to_json(s));
  return {{"vertex_ids", ids_json(l.vertex_ids)},
          {"steps", steps},
          {"start_cell", to_json(l.start_cell)},
          {"shift", to_json(l.shift)}};
}

Json descent_json(const DescentReport& d) {
  return {{"iterations", d.iterations},
          {"monotone", d.monotone},
          {"max_increase", d.max_increase},
          {"final_movement", d.final_movement}};
}

Json points_json(const std::vector<Vec>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

}  // namespace

BilliardConfig config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kConfig, "config document must be a JSON object");
  static const std::vector<std::string> known{"geometry", "dim", "radius", "center"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(ErrorCode::kConfig, "unknown config key '" + key + "'");
  }
  BilliardConfig cfg;
  std::string geom = j.value("geometry", std::string("torus"));
  if (geom == "square") {
    cfg.geometry = GeometryKind::kSquareUnfold;
  } else if (geom != "torus") {
    fail(ErrorCode::kConfig, "geometry must be 'torus' or 'square', got '" + geom + "'");
  }
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer()) fail(ErrorCode::kConfig, "config key 'dim' must be an integer");
    cfg.dim = j.at("dim").get<int>();
  }
  if (j.contains("radius")) cfg.radius = required_number<double>(j, "radius");
  if (j.contains("center")) {
    const Json& c = j.at("center");
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      fail(ErrorCode::kConfig, "config key 'center' must be [x, y]");
    cfg.center = Vec{c[0].get<double>(), c[1].get<double>()};
  }
  if (cfg.is_torus() && j.contains("center"))
    fail(ErrorCode::kConfig, "'center' applies to the square geometry only");
  if (cfg.is_square() && j.contains("dim") && cfg.dim != 2)
    fail(ErrorCode::kConfig, "the square geometry has dim = 2");
  if (cfg.is_square()) cfg.dim = 2;
  cfg.validate();
  return cfg;
}

BilliardConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfig, "cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kConfig, "config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

Json to_json(const BilliardConfig& cfg) {
  Json j{{"geometry", cfg.is_torus() ? "torus" : "square"},
         {"dim", cfg.dim},
         {"radius", cfg.radius}};
  if (cfg.is_square()) j["center"] = to_json(cfg.center);
  return j;
}

Json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"parameters", m.parameters},
          {"seed", m.seed},
          {"version", std::string(library_version())},
          {"config", to_json(m.config)}};
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (const double x : v) a.push_back(x);
  return a;
}

Json to_json(const LatticeIndex& k) {
  Json a = Json::array();
  for (const int x : k) a.push_back(x);
  return a;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::kInvalidInput, "expected a numeric array");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorCode::kInvalidInput, "expected a numeric array");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

LatticeIndex index_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::kInvalidInput, "expected an integer array");
  LatticeIndex k(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) fail(ErrorCode::kInvalidInput, "expected an integer array");
    k[static_cast<int>(i)] = j[i].get<int>();
  }
  return k;
}

Json to_json(const TorusGraph& g) {
  Json verts = Json::array();
  for (const auto& v : g.vertices()) verts.push_back(to_json(v));
  Json edges = Json::array();
  for (std::size_t a = 0; a < g.vertex_count(); ++a)
    for (const auto b : g.successors(a)) edges.push_back({a, b});
  return {{"radius", g.config().radius},
          {"dim", g.config().dim},
          {"max_norm", g.max_norm()},
          {"bound_binds", g.bound_binds()},
          {"vertex_count", g.vertex_count()},
          {"edge_count", g.edge_count()},
          {"vertices", verts},
          {"edges", edges}};
}

Json to_json(const SquareGraph& g) {
  Json verts = Json::array();
  for (const auto& v : g.vertices())
    verts.push_back({{"from", to_json(v.from)}, {"to", to_json(v.to)}});
  Json edges = Json::array();
  for (std::size_t a = 0; a < g.vertex_count(); ++a)
    for (const auto b : g.successors(a)) edges.push_back({a, b});
  return {{"radius", g.config().radius},
          {"center", to_json(g.config().center)},
          {"max_norm", g.max_norm()},
          {"bound_binds", g.bound_binds()},
          {"vertex_count", g.vertex_count()},
          {"edge_count", g.edge_count()},
          {"vertices", verts},
          {"edges", edges}};
}

Json to_json(const AdmissibleType& t) {
  Json cells = Json::array();
  for (const auto& c : t.cells) cells.push_back(to_json(c));
  Json j{{"cells", cells}};
  j["shift"] = t.shift ? to_json(*t.shift) : Json(nullptr);
  return j;
}

Json to_json(const PeriodicOrbit& o) {
  return {{"type", to_json(o.type)},
          {"points", points_json(o.points)},
          {"length", o.length},
          {"displacement", to_json(o.displacement)},
          {"rotation_vector", to_json(o.rotation_vector)},
          {"residual", o.residual},
          {"boundary_error", o.boundary_error},
          {"min_clearance", o.min_clearance},
          {"descent", descent_json(o.descent)}};
}

Json to_json(const ConstrainedPath& p) {
  return {{"type", to_json(p.type)},
          {"points", points_json(p.points)},
          {"length", p.length},
          {"displacement", to_json(p.displacement)},
          {"residual", p.residual},
          {"boundary_error", p.boundary_error},
          {"min_clearance", p.min_clearance},
          {"endpoint_crossing", p.endpoint_crossing},
          {"descent", descent_json(p.descent)}};
}

Json to_json(const AnalyticBounds& b) {
  Json j{{"eta", b.eta},
         {"dimension_radius", b.dimension_radius},
         {"eta_radius", b.eta_radius},
         {"best", b.best}};
  j["n"] = b.n ? Json(*b.n) : Json(nullptr);
  j["lattice_angle_radius"] = b.lattice_angle_radius ? Json(*b.lattice_angle_radius) : Json(nullptr);
  return j;
}

Json to_json(const OuterBound& b) {
  return {{"c1", b.c1}, {"c2", b.c2}, {"alpha", b.alpha}, {"a", b.a}, {"samples", b.samples}};
}

Json to_json(const RotationSetEstimate& e) {
  Json loops = Json::array();
  for (std::size_t i = 0; i < e.loops.size(); ++i) {
    Json l = loop_json(e.loops[i]);
    l["length"] = e.loop_lengths[i];
    l["residual"] = e.loop_residuals[i];
    loops.push_back(std::move(l));
  }
  Json pts = Json::array();
  for (const auto& p : e.points)
    pts.push_back({{"w", to_json(p.w)}, {"loop", p.loop}, {"reversed", p.reversed}});
  Json facets = Json::array();
  for (const auto& f : e.hull.facets())
    facets.push_back({{"normal", to_json(f.normal)}, {"offset", f.offset}, {"vertices", f.vertices}});
  Json failures = Json::array();
  for (const auto& f : e.failures) failures.push_back(error_json(f));
  return {{"max_len", e.max_len},
          {"budget", e.budget},
          {"truncated", e.truncated},
          {"loops", loops},
          {"points", pts},
          {"hull_vertices", e.hull.vertex_ids()},
          {"hull_facets", facets},
          {"inscribed_radius", e.inscribed_radius},
          {"bounds", to_json(e.bounds)},
          {"failures", failures}};
}

Json to_json(const SquareInterval& s) {
  Json loops = Json::array();
  for (const auto& l : s.loops) {
    Json j = loop_json(l.loop);
    j["diagonal_n"] = l.diagonal_n;
    j["rotation_number"] = l.rotation_number;
    j["length"] = l.length;
    loops.push_back(std::move(j));
  }
  Json failures = Json::array();
  for (const auto& f : s.failures) failures.push_back(error_json(f));
  return {{"v", s.v},
          {"lo", s.lo},
          {"hi", s.hi},
          {"truncated", s.truncated},
          {"loops_used", s.loops.size()},
          {"loops", loops},
          {"failures", failures}};
}

Json to_json(const TrackingRun& t) {
  Json blocks = Json::array();
  for (const auto& b : t.blocks) blocks.push_back({{"base", b.base}, {"count", b.count}});
  return {{"target", to_json(t.target)},
          {"base_rotation", points_json(t.base_rotation)},
          {"base_length", t.base_length},
          {"hull_margin", t.hull_margin},
          {"blocks", blocks},
          {"reflections", t.points.size()},
          {"deviation_sup", t.deviation_sup},
          {"block_deviation_sup", t.block_deviation_sup},
          {"K", t.K},
          {"L", t.L},
          {"s", t.s},
          {"eps", t.eps},
          {"declared_M", t.declared_M},
          {"bound_holds", t.bound_holds},
          {"total_time", t.total_time},
          {"empirical_rotation", to_json(t.empirical_rotation)},
          {"times", t.times},
          {"drift", t.drift}};
}

Json trajectory_summary(const TrajectoryRecord& rec) {
  return {{"geometry", rec.geometry == GeometryKind::kTorusLift ? "torus" : "square"},
          {"initial_position", to_json(rec.initial.position)},
          {"initial_velocity", to_json(rec.initial.velocity)},
          {"final_position", to_json(rec.final.position)},
          {"final_velocity", to_json(rec.final.velocity)},
          {"final_cell", to_json(rec.final.cell)},
          {"time", rec.final.time - rec.initial.time},
          {"displacement", to_json(rec.displacement)},
          {"empirical_rotation", to_json(empirical_rotation(rec))},
          {"obstacle_hits", rec.obstacle_hits},
          {"wall_hits", rec.wall_hits},
          {"corner_hits", rec.corner_hits},
          {"grazing_passes", rec.grazing_passes},
          {"min_incidence", rec.min_incidence},
          {"max_speed_error", rec.max_speed_error},
          {"events", rec.events.size()}};
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  const int m = rec.initial.position.dim();
  static const char* axes = "xyzuvwab";
  os << "time";
  for (int a = 0; a < m; ++a) os << ',' << axes[a];
  for (int a = 0; a < m; ++a) os << ",k" << a;
  os << ",kind\n";
  for (const auto& e : rec.events) {
    os << format_double(e.time);
    for (int a = 0; a < m; ++a) os << ',' << format_double(e.position[a]);
    for (int a = 0; a < m; ++a) os << ',' << e.cell[a];
    os << ',' << to_string(e.kind) << '\n';
  }
}

}  // namespace rotset
