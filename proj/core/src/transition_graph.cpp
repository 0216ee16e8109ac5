#include "rotset/transition_graph.hpp"

#include <algorithm>
#include <functional>

namespace rotset {

// ---------------------------------------------------------------------------
// Types

LatticeIndex AdmissibleType::cell(long n) const {
  if (!periodic()) return cells.at(static_cast<std::size_t>(n));
  const long q = period();
  const long wraps = n / q;
  LatticeIndex k = cells[static_cast<std::size_t>(n % q)];
  for (int d = 0; d < k.dim(); ++d) k[d] += static_cast<int>(wraps) * (*shift)[d];
  return k;
}

AdmissibleType AdmissibleType::reversed() const {
  AdmissibleType r;
  if (!periodic()) {
    r.cells.assign(cells.rbegin(), cells.rend());
    return r;
  }
  // Reversed period starts at k_q = k_0 + p and walks back to k_1.
  const int q = period();
  r.cells.reserve(cells.size());
  r.cells.push_back(cells[0] + *shift);
  for (int n = q - 1; n >= 1; --n) r.cells.push_back(cells[static_cast<std::size_t>(n)]);
  r.shift = -*shift;
  return r;
}

AdmissibleType LoopSpec::to_type() const {
  AdmissibleType t;
  LatticeIndex k = start_cell;
  for (const auto& l : steps) {
    t.cells.push_back(k);
    k += l;
  }
  t.shift = shift;
  return t;
}

// ---------------------------------------------------------------------------
// Digraph

void Digraph::init(std::size_t n) {
  succ_.assign(n, {});
  dense_.assign(n * n, false);
  edges_ = 0;
}

void Digraph::add_edge(std::size_t from, std::size_t to) {
  const std::size_t at = from * succ_.size() + to;
  if (dense_[at]) return;
  dense_[at] = true;
  succ_[from].push_back(static_cast<std::uint32_t>(to));
  ++edges_;
}

double default_max_norm(double radius) { return std::ceil(1.0 / (2.0 * radius)) + 1.0; }

namespace {

template <class F>
void for_each_in_box(int dim, int bound, F&& f) {
  LatticeIndex k(dim);
  for (int d = 0; d < dim; ++d) k[d] = -bound;
  while (true) {
    f(k);
    int d = 0;
    for (; d < dim; ++d) {
      if (++k[d] <= bound) break;
      k[d] = -bound;
    }
    if (d == dim) return;
  }
}

double checked_bound(const BilliardConfig& cfg, std::optional<double> max_norm) {
  const double bound = max_norm.value_or(default_max_norm(cfg.radius));
  if (!(bound >= std::sqrt(static_cast<double>(cfg.dim)) - tol::kGeom))
    fail(ErrorCode::kConfig, "max_norm " + std::to_string(bound) +
                                 " is below sqrt(m); the graph would miss {-1,0,1}^m");
  return bound;
}

bool within(const LatticeIndex& j, double bound) {
  return static_cast<double>(norm2(j)) <= bound * bound + 1e-9;
}

}  // namespace

// ---------------------------------------------------------------------------
// TorusGraph

TorusGraph TorusGraph::build(const BilliardConfig& cfg, std::optional<double> max_norm) {
  cfg.validate();
  if (!cfg.is_torus()) fail(ErrorCode::kConfig, "build_torus_graph needs torus geometry");
  TorusGraph g;
  g.cfg_ = cfg;
  g.max_norm_ = checked_bound(cfg, max_norm);

  const LatticeIndex origin(cfg.dim);
  const int box = static_cast<int>(std::floor(g.max_norm_ + 1e-9));
  for_each_in_box(cfg.dim, box, [&](const LatticeIndex& j) {
    if (is_zero(j) || !within(j, g.max_norm_)) return;
    if (is_unobstructed(origin, j, cfg)) g.vertices_.push_back(j);
  });
  std::sort(g.vertices_.begin(), g.vertices_.end());

  for (const auto& v : g.vertices_)
    if (norm(v) > g.max_norm_ - 1.0) g.bound_binds_ = true;

  const std::size_t n = g.vertices_.size();
  g.init(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto& ja = g.vertices_[a];
      if (!is_between(ja, origin, ja + g.vertices_[b], cfg)) g.add_edge(a, b);
    }
  return g;
}

std::optional<std::size_t> TorusGraph::index_of(const LatticeIndex& j) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), j);
  if (it == vertices_.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool TorusGraph::has_edge(const LatticeIndex& from, const LatticeIndex& to) const {
  const auto a = index_of(from);
  const auto b = index_of(to);
  return a && b && Digraph::has_edge(*a, *b);
}

LoopSpec TorusGraph::loop_from_ids(const std::vector<std::uint32_t>& ids) const {
  if (ids.size() < 2) fail(ErrorCode::kInvalidInput, "a loop needs at least two vertices");
  LoopSpec loop;
  loop.vertex_ids = ids;
  loop.start_cell = LatticeIndex(cfg_.dim);
  loop.shift = LatticeIndex(cfg_.dim);
  for (std::size_t n = 0; n < ids.size(); ++n) {
    const auto next = ids[(n + 1) % ids.size()];
    if (ids[n] >= vertex_count() || next >= vertex_count() || !Digraph::has_edge(ids[n], next))
      fail(ErrorCode::kInvalidInput, "loop step " + std::to_string(n) + " is not a graph edge");
    loop.steps.push_back(vertices_[ids[n]]);
    loop.shift += vertices_[ids[n]];
  }
  return loop;
}

LoopSpec TorusGraph::loop_from_steps(const std::vector<LatticeIndex>& steps) const {
  std::vector<std::uint32_t> ids;
  for (const auto& s : steps) {
    const auto id = index_of(s);
    if (!id) fail(ErrorCode::kInvalidInput, to_string(s) + " is not a vertex of the graph");
    ids.push_back(static_cast<std::uint32_t>(*id));
  }
  return loop_from_ids(ids);
}

// ---------------------------------------------------------------------------
// SquareGraph

SquareGraph SquareGraph::build(const BilliardConfig& cfg, std::optional<double> max_norm) {
  cfg.validate();
  if (!cfg.is_square()) fail(ErrorCode::kConfig, "build_square_graph needs square geometry");
  SquareGraph g;
  g.cfg_ = cfg;
  g.max_norm_ = checked_bound(cfg, max_norm);

  const int box = static_cast<int>(std::floor(g.max_norm_ + 1e-9));
  for (int qx = 0; qx <= 1; ++qx)
    for (int qy = 0; qy <= 1; ++qy) {
      const ParityClass i{qx, qy};
      for_each_in_box(2, box, [&](const LatticeIndex& l) {
        if (is_zero(l) || !within(l, g.max_norm_)) return;
        const LatticeIndex j = i + l;
        if (is_unobstructed(i, j, cfg)) g.vertices_.push_back({i, j});
      });
    }
  std::sort(g.vertices_.begin(), g.vertices_.end());

  for (const auto& v : g.vertices_)
    if (norm(v.displacement()) > g.max_norm_ - 1.0) g.bound_binds_ = true;

  const std::size_t n = g.vertices_.size();
  g.init(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& [i, j] = g.vertices_[a];
    const ParityClass next_parity = zeta(j);
    for (std::size_t b = 0; b < n; ++b) {
      const auto& vb = g.vertices_[b];
      if (vb.from != next_parity) continue;
      if (!is_between(j, i, j + vb.displacement(), cfg)) g.add_edge(a, b);
    }
  }
  return g;
}

std::optional<std::size_t> SquareGraph::index_of(const SquareVertex& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || !(*it == v)) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

LoopSpec SquareGraph::loop_from_ids(const std::vector<std::uint32_t>& ids) const {
  if (ids.size() < 2) fail(ErrorCode::kInvalidInput, "a loop needs at least two vertices");
  LoopSpec loop;
  loop.vertex_ids = ids;
  loop.start_cell = vertices_.at(ids.front()).from;
  loop.shift = LatticeIndex(2);
  for (std::size_t n = 0; n < ids.size(); ++n) {
    const auto next = ids[(n + 1) % ids.size()];
    if (ids[n] >= vertex_count() || next >= vertex_count() || !Digraph::has_edge(ids[n], next))
      fail(ErrorCode::kInvalidInput, "loop step " + std::to_string(n) + " is not a graph edge");
    const auto l = vertices_[ids[n]].displacement();
    loop.steps.push_back(l);
    loop.shift += l;
  }
  return loop;
}

// ---------------------------------------------------------------------------
// Admissibility

bool is_admissible(const AdmissibleType& t, const BilliardConfig& cfg) {
  if (t.cells.empty()) fail(ErrorCode::kInvalidInput, "is_admissible: empty sequence");
  const LatticeIndex& k0 = t.cells.front();
  if (cfg.is_torus()) {
    if (!is_zero(k0)) return false;
  } else if (!(k0 == zeta(k0))) {
    return false;
  }

  long steps = static_cast<long>(t.cells.size()) - 1;
  if (t.periodic()) {
    steps = t.period();
    // Square unfoldings repeat only under even shifts; check a doubled window.
    if (cfg.is_square() && zeta(*t.shift) != ParityClass{0, 0}) steps *= 2;
  }
  for (long n = 0; n < steps; ++n) {
    const LatticeIndex a = t.cell(n);
    const LatticeIndex b = t.cell(n + 1);
    if (a == b) return false;
    if (!is_unobstructed(a, b, cfg)) return false;
  }
  const long turns = t.periodic() ? steps : steps - 1;
  for (long n = 0; n < turns; ++n) {
    if (is_between(t.cell(n + 1), t.cell(n), t.cell(n + 2), cfg)) return false;
  }
  return true;
}

AdmissibleType path_to_type(const TorusGraph& g, const std::vector<LatticeIndex>& path) {
  AdmissibleType t;
  LatticeIndex k(g.config().dim);
  t.cells.push_back(k);
  for (std::size_t n = 0; n < path.size(); ++n) {
    if (!g.index_of(path[n]))
      fail(ErrorCode::kInvalidInput, to_string(path[n]) + " is not a vertex");
    if (n + 1 < path.size() && !g.has_edge(path[n], path[n + 1]))
      fail(ErrorCode::kInvalidInput,
           to_string(path[n]) + " -> " + to_string(path[n + 1]) + " is not an edge");
    k += path[n];
    t.cells.push_back(k);
  }
  return t;
}

std::vector<LatticeIndex> type_to_path(const TorusGraph& g, const AdmissibleType& t) {
  std::vector<LatticeIndex> path;
  const long steps = t.periodic() ? t.period() : static_cast<long>(t.cells.size()) - 1;
  for (long n = 0; n < steps; ++n) {
    LatticeIndex l = t.cell(n + 1) - t.cell(n);
    if (!g.index_of(l)) fail(ErrorCode::kInvalidInput, to_string(l) + " is not a vertex");
    if (!path.empty() && !g.has_edge(path.back(), l))
      fail(ErrorCode::kInvalidInput, "type step is not a graph edge");
    path.push_back(l);
  }
  return path;
}

AdmissibleType path_to_type(const SquareGraph& g, const std::vector<SquareVertex>& path) {
  if (path.empty()) fail(ErrorCode::kInvalidInput, "empty square path");
  AdmissibleType t;
  LatticeIndex k = path.front().from;
  t.cells.push_back(k);
  for (std::size_t n = 0; n < path.size(); ++n) {
    const auto a = g.index_of(path[n]);
    if (!a) fail(ErrorCode::kInvalidInput, "square path vertex is not in the graph");
    if (!(path[n].from == zeta(k)))
      fail(ErrorCode::kInvalidInput, "square path vertex has the wrong parity class");
    if (n + 1 < path.size()) {
      const auto b = g.index_of(path[n + 1]);
      if (!b || !g.has_edge(*a, *b)) fail(ErrorCode::kInvalidInput, "square path step is not an edge");
    }
    k += path[n].displacement();
    t.cells.push_back(k);
  }
  return t;
}

std::vector<SquareVertex> type_to_path(const SquareGraph& g, const AdmissibleType& t) {
  std::vector<SquareVertex> path;
  const long steps = t.periodic() ? t.period() : static_cast<long>(t.cells.size()) - 1;
  for (long n = 0; n < steps; ++n) {
    const LatticeIndex a = t.cell(n);
    const ParityClass i = zeta(a);
    SquareVertex v{i, i + (t.cell(n + 1) - a)};
    const auto id = g.index_of(v);
    if (!id) fail(ErrorCode::kInvalidInput, "type step is not a square-graph vertex");
    if (!path.empty() && !g.has_edge(*g.index_of(path.back()), *id))
      fail(ErrorCode::kInvalidInput, "type step is not a square-graph edge");
    path.push_back(v);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Connecting two vertices through unit vertices

namespace {

std::vector<LatticeIndex> sorted_units(int dim) {
  std::vector<LatticeIndex> units;
  for (int a = 0; a < dim; ++a) {
    units.push_back(LatticeIndex::unit(dim, a, 1));
    units.push_back(LatticeIndex::unit(dim, a, -1));
  }
  std::sort(units.begin(), units.end());
  return units;
}

LatticeIndex first_opposing_unit(const LatticeIndex& a, const std::vector<LatticeIndex>& units) {
  for (const auto& u : units)
    if (dot(a, u) < 0) return u;
  fail(ErrorCode::kInvalidInput, "connect_via_unit: zero vertex");
}

}  // namespace

std::vector<LatticeIndex> connect_via_unit(const LatticeIndex& a, const LatticeIndex& b,
                                           const TorusGraph& g) {
  if (!g.index_of(a) || !g.index_of(b))
    fail(ErrorCode::kInvalidInput, "connect_via_unit: endpoints must be graph vertices");
  const auto units = sorted_units(a.dim());
  const LatticeIndex u = first_opposing_unit(a, units);
  const LatticeIndex v = first_opposing_unit(b, units);
  std::vector<LatticeIndex> path{a, u};
  if (!(u == v)) path.push_back(v);
  path.push_back(b);
  for (std::size_t n = 0; n + 1 < path.size(); ++n)
    if (!g.has_edge(path[n], path[n + 1]))
      fail(ErrorCode::kInvariant, "connect_via_unit: missing edge " + to_string(path[n]) +
                                      " -> " + to_string(path[n + 1]));
  return path;
}

// ---------------------------------------------------------------------------
// Loop enumeration

std::vector<std::vector<std::uint32_t>> enumerate_cycles(const Digraph& g, int max_len,
                                                         std::size_t budget) {
  if (max_len < 2) fail(ErrorCode::kInvalidInput, "enumerate_loops: max_len must be >= 2");
  std::vector<std::vector<std::uint32_t>> out;
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> stack;
  std::vector<bool> on_stack(n, false);

  // Successor lists sorted once so the DFS order is lexicographic.
  std::vector<std::vector<std::uint32_t>> succ(n);
  for (std::size_t v = 0; v < n; ++v) {
    succ[v] = g.successors(v);
    std::sort(succ[v].begin(), succ[v].end());
  }

  std::function<void(std::uint32_t)> dfs = [&](std::uint32_t v) {
    for (const auto w : succ[v]) {
      if (out.size() >= budget) return;
      if (w < stack.front() || on_stack[w]) {
        if (w == stack.front() && stack.size() >= 2) out.push_back(stack);
        continue;
      }
      if (static_cast<int>(stack.size()) >= max_len) continue;
      stack.push_back(w);
      on_stack[w] = true;
      dfs(w);
      on_stack[w] = false;
      stack.pop_back();
    }
  };

  for (std::uint32_t s = 0; s < n && out.size() < budget; ++s) {
    stack.assign(1, s);
    on_stack[s] = true;
    dfs(s);
    on_stack[s] = false;
  }
  return out;
}

std::vector<LoopSpec> enumerate_loops(const TorusGraph& g, int max_len, std::size_t budget) {
  std::vector<LoopSpec> loops;
  for (const auto& ids : enumerate_cycles(g, max_len, budget)) loops.push_back(g.loop_from_ids(ids));
  return loops;
}

std::vector<LoopSpec> enumerate_loops(const SquareGraph& g, int max_len, std::size_t budget) {
  std::vector<LoopSpec> loops;
  for (const auto& ids : enumerate_cycles(g, max_len, budget)) loops.push_back(g.loop_from_ids(ids));
  return loops;
}

}  // namespace rotset
