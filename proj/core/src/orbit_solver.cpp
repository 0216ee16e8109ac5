#include "rotset/orbit_solver.hpp"

#include <limits>

#include <Eigen/Sparse>
#include <numbers>
#include <sstream>

namespace rotset {

namespace {

constexpr double kResidualMax = 1e-9;
constexpr double kNewtonStart = 1e-5;
constexpr long kNewtonGap = 10;
constexpr double kBoundaryMax = 1e-12;
constexpr double kClearanceSlack = 1e-9;
constexpr double kInvPhi = 0.6180339887498949;

struct Problem {
  std::vector<Vec> centers;
  double radius = 0.0;
  std::vector<bool> fixed;
  std::optional<Vec> shift;  ///< closure x_n = x_0 + shift
};

Vec prev_of(const Problem& pb, const std::vector<Vec>& x, std::size_t i) {
  return i > 0 ? x[i - 1] : x.back() - *pb.shift;
}

Vec next_of(const Problem& pb, const std::vector<Vec>& x, std::size_t i) {
  return i + 1 < x.size() ? x[i + 1] : x.front() + *pb.shift;
}

// Point on the sphere (c, r) minimizing |a - x| + |x - b|. Works in the plane
// through c spanned by a - c and b - c.
class ArcMinimizer {
 public:
  ArcMinimizer(const Vec& a, const Vec& b, const Vec& c, double r) : c_(c), r_(r) {
    const Vec A = a - c;
    const double na = norm(A);
    e1_ = A * (1.0 / na);
    const double bx = dot(b - c, e1_);
    Vec perp = (b - c) - e1_ * bx;
    const double by = norm(perp);
    if (by <= 1e-14 * norm(b - c)) {
      e2_ = any_orthogonal(e1_);
      phi_ = bx >= 0.0 ? 0.0 : std::numbers::pi;
      b2_ = {bx, 0.0};
    } else {
      e2_ = perp * (1.0 / by);
      phi_ = std::atan2(by, bx);
      b2_ = {bx, by};
    }
    a2_ = {na, 0.0};
  }

  Vec solve() const {
    double theta = 0.0;
    if (phi_ > 0.0) {
      constexpr int kScan = 16;
      int best = 0;
      double fbest = f(0.0);
      for (int k = 1; k <= kScan; ++k) {
        const double fk = f(phi_ * k / kScan);
        if (fk < fbest) {
          fbest = fk;
          best = k;
        }
      }
      double lo = phi_ * std::max(best - 1, 0) / kScan;
      double hi = phi_ * std::min(best + 1, kScan) / kScan;
      double x1 = hi - kInvPhi * (hi - lo);
      double x2 = lo + kInvPhi * (hi - lo);
      double f1 = f(x1);
      double f2 = f(x2);
      while (hi - lo > 1e-9) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kInvPhi * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kInvPhi * (hi - lo);
          f2 = f(x2);
        }
      }
      theta = 0.5 * (lo + hi);
      // Near the minimum f is flat to rounding, so Newton steps are judged
      // by the derivative instead.
      auto [g, h] = derivatives(theta);
      for (int it = 0; it < 8 && g != 0.0; ++it) {
        if (!(h > 0.0)) break;
        const double next = std::clamp(theta - g / h, 0.0, phi_);
        const auto [gn, hn] = derivatives(next);
        if (!(std::abs(gn) < std::abs(g))) break;
        theta = next;
        g = gn;
        h = hn;
      }
    }
    return c_ + (e1_ * std::cos(theta) + e2_ * std::sin(theta)) * r_;
  }

 private:
  double f(double t) const {
    const double ux = r_ * std::cos(t);
    const double uy = r_ * std::sin(t);
    return std::hypot(a2_[0] - ux, a2_[1] - uy) + std::hypot(b2_[0] - ux, b2_[1] - uy);
  }

  std::pair<double, double> derivatives(double t) const {
    const double cs = std::cos(t);
    const double sn = std::sin(t);
    const double px = r_ * cs;
    const double py = r_ * sn;
    const double tx = -r_ * sn;
    const double ty = r_ * cs;
    double g = 0.0;
    double h = 0.0;
    for (const auto& q : {a2_, b2_}) {
      const double dx = q[0] - px;
      const double dy = q[1] - py;
      const double d = std::hypot(dx, dy);
      const double ut = (dx * tx + dy * ty) / d;
      g -= ut;
      h += (r_ * r_ - ut * ut) / d + (dx * px + dy * py) / d;
    }
    return {g, h};
  }

  Vec c_;
  double r_;
  Vec e1_;
  Vec e2_;
  double phi_ = 0.0;
  std::array<double, 2> a2_{};
  std::array<double, 2> b2_{};
};

double total_length(const Problem& pb, const std::vector<Vec>& x) {
  return broken_line_length(x, pb.shift ? std::optional<Vec>(x.front() + *pb.shift) : std::nullopt);
}

// Gradient of the length in tangent coordinates and, when H is given, the
// Riemannian Hessian on the product of spheres.
struct Tangent {
  std::vector<std::size_t> free;  ///< point index of each free slot
  std::vector<std::vector<Vec>> basis;
};

Tangent tangent_frames(const Problem& pb, const std::vector<Vec>& x) {
  Tangent t;
  const int m = x.front().dim();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (pb.fixed[i]) continue;
    const Vec n = normalized(x[i] - pb.centers[i]);
    std::vector<Vec> frame;
    for (int a = 0; a < m && static_cast<int>(frame.size()) < m - 1; ++a) {
      Vec e = Vec::unit(m, a);
      e -= n * dot(e, n);
      for (const auto& f : frame) e -= f * dot(e, f);
      if (norm(e) > 0.3) frame.push_back(normalized(e));
    }
    t.free.push_back(i);
    t.basis.push_back(std::move(frame));
  }
  return t;
}

double assemble(const Problem& pb, const std::vector<Vec>& x, const Tangent& t,
                Eigen::VectorXd& G, Eigen::SparseMatrix<double>* H) {
  const int m = x.front().dim();
  const int k = m - 1;
  const std::size_t n = x.size();
  std::vector<long> slot(n, -1);
  for (std::size_t s = 0; s < t.free.size(); ++s) slot[t.free[s]] = static_cast<long>(s);
  const long N = static_cast<long>(t.free.size()) * k;
  G.setZero(N);
  std::vector<Vec> ambient(n, Vec::zero(m));
  std::vector<Eigen::Triplet<double>> trip;

  auto project = [&](std::size_t s, const std::vector<double>& P, std::size_t r) {
    // T_s^T P T_r
    Eigen::MatrixXd out(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        double v = 0.0;
        for (int p = 0; p < m; ++p)
          for (int q = 0; q < m; ++q)
            v += t.basis[s][a][p] * P[static_cast<std::size_t>(p * m + q)] * t.basis[r][b][q];
        out(a, b) = v;
      }
    return out;
  };
  auto add_block = [&](std::size_t s, std::size_t r, const Eigen::MatrixXd& B, double sign) {
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        trip.emplace_back(static_cast<int>(s) * k + a, static_cast<int>(r) * k + b, sign * B(a, b));
  };

  const std::size_t segs = pb.shift ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    const std::size_t j = (i + 1) % n;
    const Vec xj = i + 1 < n ? x[j] : x[j] + *pb.shift;
    const Vec d = xj - x[i];
    const double L = norm(d);
    const Vec u = d * (1.0 / L);
    ambient[i] -= u;
    ambient[j] += u;
    if (!H) continue;
    std::vector<double> P(static_cast<std::size_t>(m * m));
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        P[static_cast<std::size_t>(p * m + q)] = ((p == q ? 1.0 : 0.0) - u[p] * u[q]) / L;
    const long si = slot[i];
    const long sj = slot[j];
    if (si >= 0) add_block(si, si, project(si, P, si), 1.0);
    if (sj >= 0) add_block(sj, sj, project(sj, P, sj), 1.0);
    if (si >= 0 && sj >= 0) {
      add_block(si, sj, project(si, P, sj), -1.0);
      add_block(sj, si, project(sj, P, si), -1.0);
    }
  }
  for (std::size_t s = 0; s < t.free.size(); ++s) {
    const std::size_t i = t.free[s];
    for (int a = 0; a < k; ++a) G(static_cast<long>(s) * k + a) = dot(t.basis[s][a], ambient[i]);
    if (H) {
      const Vec nrm = normalized(x[i] - pb.centers[i]);
      const double w = -dot(ambient[i], nrm) / pb.radius;
      for (int a = 0; a < k; ++a)
        trip.emplace_back(static_cast<int>(s) * k + a, static_cast<int>(s) * k + a, w);
    }
  }
  if (H) {
    H->resize(N, N);
    H->setFromTriplets(trip.begin(), trip.end());
  }
  return G.size() ? G.cwiseAbs().maxCoeff() : 0.0;
}

// Newton iterations on the product of spheres. Each step must lower the
// tangent gradient and may not raise the length beyond rounding.
void newton_polish(const Problem& pb, std::vector<Vec>& x, DescentReport& rep) {
  double len = total_length(pb, x);
  for (int it = 0; it < 30; ++it) {
    const Tangent t = tangent_frames(pb, x);
    if (t.free.empty()) return;
    Eigen::VectorXd G;
    Eigen::SparseMatrix<double> H;
    const double gnorm = assemble(pb, x, t, G, &H);
    if (gnorm < 1e-15) return;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) return;
    const Eigen::VectorXd delta = -ldlt.solve(G);
    if (ldlt.info() != Eigen::Success || !delta.allFinite()) return;

    const int k = x.front().dim() - 1;
    std::vector<Vec> trial = x;
    for (std::size_t s = 0; s < t.free.size(); ++s) {
      const std::size_t i = t.free[s];
      Vec p = x[i];
      for (int a = 0; a < k; ++a) p += t.basis[s][a] * delta(static_cast<long>(s) * k + a);
      trial[i] = pb.centers[i] + normalized(p - pb.centers[i]) * pb.radius;
    }
    const double trial_len = total_length(pb, trial);
    if (trial_len > len + 64.0 * std::numeric_limits<double>::epsilon() * len) return;
    Eigen::VectorXd G2;
    const double g2 = assemble(pb, trial, tangent_frames(pb, trial), G2, nullptr);
    if (!(g2 < gnorm)) return;
    if (trial_len > len) rep.max_increase = std::max(rep.max_increase, trial_len - len);
    x = std::move(trial);
    len = trial_len;
  }
}

DescentReport descend(const Problem& pb, std::vector<Vec>& x, const OrbitOptions& opts) {
  DescentReport rep;
  double len = total_length(pb, x);
  long polish = 0;
  long last_newton = -kNewtonGap;
  for (rep.iterations = 1; rep.iterations <= opts.max_iters; ++rep.iterations) {
    double moved = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (pb.fixed[i]) continue;
      const Vec a = prev_of(pb, x, i);
      const Vec b = next_of(pb, x, i);
      const Vec cand = ArcMinimizer(a, b, pb.centers[i], pb.radius).solve();
      const double before = norm(a - x[i]) + norm(x[i] - b);
      const double after = norm(a - cand) + norm(cand - b);
      if (after <= before + 4.0 * std::numeric_limits<double>::epsilon() * before) {
        moved = std::max(moved, norm(cand - x[i]));
        x[i] = cand;
      }
    }
    const double next_len = total_length(pb, x);
    const double increase = next_len - len;
    if (increase > 0.0) {
      rep.max_increase = std::max(rep.max_increase, increase);
      if (increase > 64.0 * std::numeric_limits<double>::epsilon() * len) rep.monotone = false;
    }
    len = next_len;
    rep.final_movement = moved;
    if (moved < opts.tol) {
      if (++polish < 2) continue;
      newton_polish(pb, x, rep);
      return rep;
    }
    polish = 0;
    // Sweeps converge slowly along long chains; Newton finishes the job once
    // the iterate is close.
    if (moved < kNewtonStart && rep.iterations - last_newton >= kNewtonGap) {
      last_newton = rep.iterations;
      newton_polish(pb, x, rep);
      len = total_length(pb, x);
    }
  }
  std::ostringstream msg;
  msg << "orbit solver did not converge after " << opts.max_iters
      << " sweeps; last movement " << rep.final_movement;
  fail(ErrorCode::kSolver, msg.str());
}

void initialize(const Problem& pb, std::vector<Vec>& x, const OrbitOptions& opts) {
  const std::size_t n = pb.centers.size();
  if (!opts.initial.empty()) {
    if (opts.initial.size() != n)
      fail(ErrorCode::kInvalidInput, "initial point count does not match the type");
    for (std::size_t i = 0; i < n; ++i) {
      if (pb.fixed[i]) continue;
      Vec d = opts.initial[i] - pb.centers[i];
      if (norm(d) < tol::kGeom) d = any_orthogonal(Vec::unit(d.dim(), 0));
      x[i] = pb.centers[i] + normalized(d) * pb.radius;
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (pb.fixed[i]) continue;
    const Vec cp = i > 0 ? pb.centers[i - 1] : pb.centers.back() - *pb.shift;
    const Vec cn = i + 1 < n ? pb.centers[i + 1] : pb.centers.front() + *pb.shift;
    Vec d = (cp + cn) * 0.5 - pb.centers[i];
    if (norm(d) < tol::kGeom) d = any_orthogonal(cn - cp);
    x[i] = pb.centers[i] + normalized(d) * pb.radius;
  }
}

double segment_clearance(const LatticeIndex& ka, const LatticeIndex& kb, const Vec& xa,
                         const Vec& xb, const BilliardConfig& cfg) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& k : candidate_blockers(ka, kb, cfg))
    best = std::min(best, point_segment_distance(obstacle_center(k, cfg), xa, xb));
  return best;
}

void expect_on_sphere(const Vec& x, const Vec& c, double r, const char* what) {
  if (std::abs(norm(x - c) - r) > 1e-9)
    fail(ErrorCode::kInvalidInput, std::string(what) + " is not on its obstacle boundary");
}

}  // namespace

double broken_line_length(const std::vector<Vec>& points, const std::optional<Vec>& ghost) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) len += norm(points[i + 1] - points[i]);
  if (ghost && !points.empty()) len += norm(*ghost - points.back());
  return len;
}

double reflection_residual(const Vec& prev, const Vec& at, const Vec& next, const Vec& center) {
  const Vec din = normalized(at - prev);
  const Vec dout = normalized(next - at);
  const Vec n = normalized(at - center);
  return angle_between(reflect_direction(din, n), dout);
}

PeriodicOrbit solve_periodic_orbit(const LoopSpec& loop, const BilliardConfig& cfg,
                                   const OrbitOptions& opts) {
  return solve_periodic_orbit(loop.to_type(), cfg, opts);
}

PeriodicOrbit solve_periodic_orbit(const AdmissibleType& type_in, const BilliardConfig& cfg,
                                   const OrbitOptions& opts) {
  cfg.validate();
  if (!type_in.periodic()) fail(ErrorCode::kInvalidInput, "periodic solve needs a periodic type");
  if (type_in.period() < 2) fail(ErrorCode::kInvalidInput, "periodic type needs period >= 2");
  if (!(opts.tol > 0.0)) fail(ErrorCode::kInvalidInput, "tol must be positive");

  AdmissibleType type = type_in;
  if (cfg.is_square() && !(zeta(*type.shift) == ParityClass{0, 0})) {
    const int q = type.period();
    for (int n = q; n < 2 * q; ++n) type.cells.push_back(type_in.cell(n));
    type.shift = *type_in.shift + *type_in.shift;
  }
  if (!is_admissible(type, cfg))
    fail(ErrorCode::kInvalidInput, "periodic type is not admissible");

  const int q = type.period();
  Problem pb;
  pb.radius = cfg.radius;
  for (int n = 0; n < q; ++n) pb.centers.push_back(obstacle_center(type.cells[n], cfg));
  pb.shift = obstacle_center(type.cell(q), cfg) - pb.centers.front();
  pb.fixed.assign(static_cast<std::size_t>(q), false);

  std::vector<Vec> x(static_cast<std::size_t>(q), Vec::zero(cfg.dim));
  initialize(pb, x, opts);

  PeriodicOrbit orbit;
  orbit.descent = descend(pb, x, opts);
  orbit.type = type;
  orbit.points = x;
  orbit.length = total_length(pb, x);
  orbit.displacement = *pb.shift;
  orbit.rotation_vector = orbit.displacement * (1.0 / orbit.length);

  orbit.min_clearance = std::numeric_limits<double>::infinity();
  for (int n = 0; n < q; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const Vec a = prev_of(pb, x, i);
    const Vec b = next_of(pb, x, i);
    orbit.residual = std::max(orbit.residual, reflection_residual(a, x[i], b, pb.centers[i]));
    orbit.boundary_error =
        std::max(orbit.boundary_error, std::abs(norm(x[i] - pb.centers[i]) - cfg.radius));
    if (opts.check_clearance)
      orbit.min_clearance = std::min(
          orbit.min_clearance, segment_clearance(type.cell(n), type.cell(n + 1), x[i], b, cfg));
  }

  std::ostringstream msg;
  msg.precision(3);
  if (orbit.residual > kResidualMax) {
    msg << "orbit converged with reflection residual " << orbit.residual;
    fail(ErrorCode::kSolver, msg.str());
  }
  if (orbit.boundary_error > kBoundaryMax) {
    msg << "orbit point off its boundary by " << orbit.boundary_error;
    fail(ErrorCode::kInvariant, msg.str());
  }
  if (opts.check_clearance && orbit.min_clearance < cfg.radius - kClearanceSlack) {
    msg << "admissibility mismatch: orbit segment passes within " << orbit.min_clearance
        << " of an obstacle center";
    fail(ErrorCode::kInvariant, msg.str());
  }
  return orbit;
}

ConstrainedPath solve_constrained_path(const AdmissibleType& type, const Vec& x0, const Vec& xs,
                                       const BilliardConfig& cfg, const OrbitOptions& opts) {
  cfg.validate();
  if (type.cells.size() < 2)
    fail(ErrorCode::kInvalidInput, "constrained path needs at least two cells");
  if (!(opts.tol > 0.0)) fail(ErrorCode::kInvalidInput, "tol must be positive");
  AdmissibleType finite;
  finite.cells = type.cells;
  if (!is_admissible(finite, cfg))
    fail(ErrorCode::kInvalidInput, "constrained path type is not admissible");

  const std::size_t n = finite.cells.size();
  Problem pb;
  pb.radius = cfg.radius;
  for (const auto& k : finite.cells) pb.centers.push_back(obstacle_center(k, cfg));
  pb.fixed.assign(n, false);
  pb.fixed.front() = true;
  pb.fixed.back() = true;
  expect_on_sphere(x0, pb.centers.front(), cfg.radius, "x0");
  expect_on_sphere(xs, pb.centers.back(), cfg.radius, "xs");
  if (n == 2 && norm(xs - x0) < tol::kGeom)
    fail(ErrorCode::kInvalidInput, "zero-length constrained path");

  std::vector<Vec> x(n, Vec::zero(cfg.dim));
  x.front() = pb.centers.front() + normalized(x0 - pb.centers.front()) * cfg.radius;
  x.back() = pb.centers.back() + normalized(xs - pb.centers.back()) * cfg.radius;

  ConstrainedPath path;
  if (n > 2) {
    initialize(pb, x, opts);
    path.descent = descend(pb, x, opts);
  }
  path.type = finite;
  path.points = x;
  path.length = broken_line_length(x);
  path.displacement = x.back() - x.front();

  path.min_clearance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    path.boundary_error =
        std::max(path.boundary_error, std::abs(norm(x[i] - pb.centers[i]) - cfg.radius));
    if (i > 0 && i + 1 < n)
      path.residual =
          std::max(path.residual, reflection_residual(x[i - 1], x[i], x[i + 1], pb.centers[i]));
    if (i + 1 < n && opts.check_clearance)
      path.min_clearance = std::min(
          path.min_clearance,
          segment_clearance(finite.cells[i], finite.cells[i + 1], x[i], x[i + 1], cfg));
  }
  const Vec n0 = x.front() - pb.centers.front();
  const Vec ns = x.back() - pb.centers.back();
  path.endpoint_crossing = dot(x[1] - x[0], n0) < 0.0 || dot(x[n - 2] - x[n - 1], ns) < 0.0;

  std::ostringstream msg;
  msg.precision(3);
  if (path.residual > kResidualMax) {
    msg << "constrained path converged with reflection residual " << path.residual;
    fail(ErrorCode::kSolver, msg.str());
  }
  if (path.boundary_error > kBoundaryMax) {
    msg << "path point off its boundary by " << path.boundary_error;
    fail(ErrorCode::kInvariant, msg.str());
  }
  if (opts.check_clearance && path.min_clearance < cfg.radius - kClearanceSlack) {
    msg << "admissibility mismatch: path segment passes within " << path.min_clearance
        << " of an obstacle center";
    fail(ErrorCode::kInvariant, msg.str());
  }
  return path;
}

Vec orbit_rotation_vector(const PeriodicOrbit& orbit) {
  if (!(orbit.length > 0.0)) fail(ErrorCode::kInvalidInput, "orbit has zero length");
  return orbit.displacement * (1.0 / orbit.length);
}

}  // namespace rotset
