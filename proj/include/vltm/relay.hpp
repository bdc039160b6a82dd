#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vltm/vec3.hpp"

namespace vltm {

/// Relay-wall capture topology: laser illumination points, SPAD measurement
/// points, and the wall plane they share. The wall plane is defined by the
/// first laser point and the wall normal.
struct RelayTopology {
  std::vector<Vec3> laser_points;
  std::vector<Vec3> spad_points;
  Vec3 wall_normal{0.0, 1.0, 0.0};

  std::size_t laser_count() const { return laser_points.size(); }
  std::size_t spad_count() const { return spad_points.size(); }

  void validate() const {
    if (laser_points.empty()) throw std::invalid_argument("RelayTopology: need at least one laser point");
    if (spad_points.empty()) throw std::invalid_argument("RelayTopology: need at least one SPAD point");
    if (std::abs(wall_normal.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("RelayTopology: wall_normal must be unit length");
    const double plane_offset = wall_normal.dot(laser_points.front());
    auto check_on_plane = [&](const Vec3& p, const char* what) {
      if (!p.finite()) throw std::invalid_argument(std::string("RelayTopology: nonfinite ") + what);
      if (std::abs(wall_normal.dot(p) - plane_offset) > 1e-9)
        throw std::invalid_argument(std::string("RelayTopology: ") + what +
                                    " not coplanar with the relay wall");
    };
    for (const Vec3& p : laser_points) check_on_plane(p, "laser point");
    for (const Vec3& p : spad_points) check_on_plane(p, "SPAD point");
  }

  /// Signed distance of a point from the wall plane along the normal.
  double height_above_wall(const Vec3& p) const {
    return wall_normal.dot(p - laser_points.front());
  }
};

namespace detail {

/// Spacing of the distinct values in v (tolerance 1e-9), or 0 for a
/// degenerate axis with a single distinct value.
inline double axis_spacing(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] - v[i - 1] > 1e-9) ++distinct;
  if (distinct < 2) return 0.0;
  return (v.back() - v.front()) / static_cast<double>(distinct - 1);
}

}  // namespace detail

/// Riemann cell weight for a uniform grid of relay points: the product of
/// point spacings along the wall tangent axes. A degenerate axis (single
/// row/column or a lone point) contributes factor 1, so 2D grids integrate
/// over area, 1D arrays over length, and single points are unit-weighted.
inline double quadrature_weight(const std::vector<Vec3>& points, const Vec3& wall_normal) {
  if (points.empty()) throw std::invalid_argument("quadrature_weight: empty point set");
  Vec3 u, v;
  tangent_basis(wall_normal, u, v);
  std::vector<double> us, vs;
  us.reserve(points.size());
  vs.reserve(points.size());
  for (const Vec3& p : points) {
    us.push_back(u.dot(p));
    vs.push_back(v.dot(p));
  }
  const double su = detail::axis_spacing(std::move(us));
  const double sv = detail::axis_spacing(std::move(vs));
  return (su > 0.0 ? su : 1.0) * (sv > 0.0 ? sv : 1.0);
}

}  // namespace vltm
