#pragma once

#include <cmath>
#include <ostream>

namespace vltm {

/// Cartesian 3-vector in meters. Plain value type, double precision.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  constexpr double norm2() const { return dot(*this); }
  Vec3 normalized() const { return *this / norm(); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (b - a).norm(); }

/// Mirror reflection of `dir` about unit `normal` (both pointing away from
/// the surface): r = 2(n.d)n - d.
inline Vec3 reflect(const Vec3& dir, const Vec3& normal) {
  return 2.0 * normal.dot(dir) * normal - dir;
}

/// Deterministic orthonormal tangent basis (u, v) for a unit normal n,
/// with u x v = n. Shared by grid generation and quadrature so both see
/// identical axes.
inline void tangent_basis(const Vec3& n, Vec3& u, Vec3& v) {
  const Vec3 h = std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  u = h.cross(n).normalized();
  v = n.cross(u);
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << v.x << " " << v.y << " " << v.z;
}

}  // namespace vltm
