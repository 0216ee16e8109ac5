#include "rotset/geometry.hpp"

#include <numbers>
#include <sstream>

namespace rotset {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kSolver: return "solver";
    case ErrorCode::kInvariant: return "invariant";
    case ErrorCode::kNotImplemented: return "not-implemented";
  }
  return "unknown";
}

Vec to_vec(const LatticeIndex& k) {
  Vec v(k.dim());
  for (int i = 0; i < k.dim(); ++i) v[i] = static_cast<double>(k[i]);
  return v;
}

bool is_zero(const LatticeIndex& k) noexcept {
  return std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
}

Vec normalized(const Vec& v) {
  const double n = norm(v);
  if (!(n > tol::kGeom)) fail(ErrorCode::kInvalidInput, "cannot normalize a zero vector");
  return v * (1.0 / n);
}

namespace {
template <class T>
std::string join(const SmallVec<T>& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}
}  // namespace

std::string to_string(const Vec& v) { return join(v); }
std::string to_string(const LatticeIndex& k) { return join(k); }

namespace {
bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}
}  // namespace

double point_segment_distance(const Vec& p, const Vec& a_in, const Vec& b_in) {
  // Canonical endpoint order makes the result exactly symmetric in (a, b).
  const bool swap = lex_less(b_in, a_in);
  const Vec& a = swap ? b_in : a_in;
  const Vec& b = swap ? a_in : b_in;
  const Vec ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) fail(ErrorCode::kInvalidInput, "degenerate segment: a == b");
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

Vec reflect_direction(const Vec& v, const Vec& n) {
  if (std::abs(norm(v) - 1.0) > tol::kUnitInput || std::abs(norm(n) - 1.0) > tol::kUnitInput)
    fail(ErrorCode::kInvalidInput, "reflect_direction expects unit vectors");
  return v - n * (2.0 * dot(v, n));
}

std::optional<double> ray_ball_intersect(const Ray& ray, const Ball& ball) {
  const Vec oc = ray.origin - ball.center;
  const double dist = norm(oc);
  if (dist < ball.radius - tol::kHit)
    fail(ErrorCode::kInvalidInput, "ray origin inside obstacle");
  const double b = dot(ray.direction, oc);
  const double c = (dist - ball.radius) * (dist + ball.radius);
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  // Roots of t^2 + 2bt + c; the cancellation-free pair.
  double t1;
  double t2;
  if (b > 0.0) {
    const double q = -b - sq;
    t1 = q;
    t2 = q != 0.0 ? c / q : 0.0;
  } else {
    const double q = -b + sq;
    t2 = q;
    t1 = q != 0.0 ? c / q : 0.0;
  }
  if (t1 > t2) std::swap(t1, t2);
  if (t1 > tol::kHit) return t1;
  if (t2 > tol::kHit) return t2;
  return std::nullopt;
}

double angle_between(const Vec& u, const Vec& v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) fail(ErrorCode::kInvalidInput, "angle with a zero vector");
  // acos loses half the digits near 0 and pi; this form keeps them.
  const Vec a = u * (1.0 / nu);
  const Vec b = v * (1.0 / nv);
  return 2.0 * std::atan2(norm(a - b), norm(a + b));
}

Vec any_orthogonal(const Vec& u) {
  // Gram-Schmidt against the axis least aligned with u.
  int axis = 0;
  for (int i = 1; i < u.dim(); ++i)
    if (std::abs(u[i]) < std::abs(u[axis])) axis = i;
  const Vec e = Vec::unit(u.dim(), axis);
  const Vec un = normalized(u);
  return normalized(e - un * dot(e, un));
}

}  // namespace rotset
