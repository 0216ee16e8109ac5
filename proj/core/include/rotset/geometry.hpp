#pragma once
/**
 * @file geometry.hpp
 * @brief Dimension-generic vectors, balls, rays and the handful of
 *        primitives (distances, reflections, ray casts) the billiard code
 *        is built from.
 *
 * Vectors carry their dimension at runtime but store coordinates inline
 * (capacity kMaxDim), so the hot loops of the flow and the solver never
 * allocate. Lattice indices share the same container with integer entries.
 *
 * Tolerances are centralized in `tol`; every comparison in the library
 * that is not an exact integer test goes through one of these names.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>

#include "rotset/error.hpp"

namespace rotset {

inline constexpr int kMaxDim = 8;

namespace tol {
inline constexpr double kGeom = 1e-12;      ///< identity / unit-norm checks
inline constexpr double kHit = 1e-9;        ///< minimum event time along a ray
inline constexpr double kBetween = 1e-12;   ///< slack on the 2r capsule test
inline constexpr double kGrazing = 1e-9;    ///< |<v,n>| below this is tangency
inline constexpr double kCorner = 1e-9;     ///< simultaneous wall hits
inline constexpr double kUnitInput = 1e-9;  ///< accepted drift of "unit" inputs
}  // namespace tol

template <class T>
class SmallVec {
 public:
  using value_type = T;

  SmallVec() = default;

  explicit SmallVec(int dim) : dim_(check_dim(dim)) { data_.fill(T{}); }

  SmallVec(std::initializer_list<T> init)
      : dim_(check_dim(static_cast<int>(init.size()))) {
    data_.fill(T{});
    std::copy(init.begin(), init.end(), data_.begin());
  }

  explicit SmallVec(std::span<const T> values)
      : dim_(check_dim(static_cast<int>(values.size()))) {
    data_.fill(T{});
    std::copy(values.begin(), values.end(), data_.begin());
  }

  static SmallVec zero(int dim) { return SmallVec(dim); }

  static SmallVec unit(int dim, int axis, T sign = T{1}) {
    SmallVec v(dim);
    v[axis] = sign;
    return v;
  }

  int dim() const noexcept { return dim_; }
  T& operator[](int i) noexcept { return data_[static_cast<std::size_t>(i)]; }
  const T& operator[](int i) const noexcept {
    return data_[static_cast<std::size_t>(i)];
  }

  const T* begin() const noexcept { return data_.data(); }
  const T* end() const noexcept { return data_.data() + dim_; }
  T* begin() noexcept { return data_.data(); }
  T* end() noexcept { return data_.data() + dim_; }
  std::span<const T> span() const noexcept { return {data_.data(), static_cast<std::size_t>(dim_)}; }

  SmallVec& operator+=(const SmallVec& o) noexcept {
    for (int i = 0; i < dim_; ++i) (*this)[i] += o[i];
    return *this;
  }
  SmallVec& operator-=(const SmallVec& o) noexcept {
    for (int i = 0; i < dim_; ++i) (*this)[i] -= o[i];
    return *this;
  }
  SmallVec& operator*=(T s) noexcept {
    for (int i = 0; i < dim_; ++i) (*this)[i] *= s;
    return *this;
  }

  friend SmallVec operator+(SmallVec a, const SmallVec& b) noexcept { return a += b; }
  friend SmallVec operator-(SmallVec a, const SmallVec& b) noexcept { return a -= b; }
  friend SmallVec operator*(SmallVec a, T s) noexcept { return a *= s; }
  friend SmallVec operator*(T s, SmallVec a) noexcept { return a *= s; }
  friend SmallVec operator-(SmallVec a) noexcept { return a *= T{-1}; }

  bool operator==(const SmallVec& o) const noexcept {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i)
      if ((*this)[i] != o[i]) return false;
    return true;
  }

  /// Lexicographic on coordinates (dimension first). Used for stable ordering.
  std::strong_ordering operator<=>(const SmallVec& o) const noexcept
    requires std::integral<T>
  {
    if (auto c = dim_ <=> o.dim_; c != 0) return c;
    for (int i = 0; i < dim_; ++i)
      if (auto c = (*this)[i] <=> o[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  static std::uint8_t check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
      fail(ErrorCode::kInvalidInput, "vector dimension " + std::to_string(dim) +
                                         " outside [1, " + std::to_string(kMaxDim) + "]");
    return static_cast<std::uint8_t>(dim);
  }

  std::array<T, kMaxDim> data_{};
  std::uint8_t dim_ = 0;
};

using Vec = SmallVec<double>;
using LatticeIndex = SmallVec<int>;

template <class T>
T dot(const SmallVec<T>& a, const SmallVec<T>& b) noexcept {
  T s{};
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& v) noexcept { return dot(v, v); }
inline double norm(const Vec& v) noexcept { return std::sqrt(norm2(v)); }
inline int norm2(const LatticeIndex& k) noexcept { return dot(k, k); }
inline double norm(const LatticeIndex& k) noexcept {
  return std::sqrt(static_cast<double>(norm2(k)));
}

Vec to_vec(const LatticeIndex& k);
bool is_zero(const LatticeIndex& k) noexcept;

/// Returns v / |v|; throws on a (numerically) zero vector.
Vec normalized(const Vec& v);

std::string to_string(const Vec& v);
std::string to_string(const LatticeIndex& k);

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct Ray {
  Vec origin;
  Vec direction;  ///< unit
};

/// Distance from p to the closed segment [a, b]. Throws on a == b.
double point_segment_distance(const Vec& p, const Vec& a, const Vec& b);

/// Specular reflection v - 2<v,n>n of a unit direction in a unit normal.
Vec reflect_direction(const Vec& v, const Vec& n);

/// First parameter t > tol::kHit at which the ray meets the sphere, if any.
/// Throws when the origin is strictly inside the ball.
std::optional<double> ray_ball_intersect(const Ray& ray, const Ball& ball);

/// Angle in [0, pi], accurate near 0 and pi.
double angle_between(const Vec& u, const Vec& v);

/// Some unit vector orthogonal to `u` (u nonzero).
Vec any_orthogonal(const Vec& u);

}  // namespace rotset
