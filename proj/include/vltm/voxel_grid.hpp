#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "vltm/vec3.hpp"

namespace vltm {

/// Regular voxelization of the hidden volume. `origin` is the center of
/// voxel (0,0,0); voxel (ix,iy,iz) is centered at origin + pitch*(ix,iy,iz).
/// Flat indices run x-fastest: index = ix + nx*(iy + ny*iz).
struct VoxelGrid {
  Vec3 origin;
  std::size_t nx = 1, ny = 1, nz = 1;
  double pitch = 0.0;

  std::size_t count() const { return nx * ny * nz; }

  void validate() const {
    if (!(pitch > 0.0) || !std::isfinite(pitch))
      throw std::invalid_argument("VoxelGrid: pitch must be positive and finite");
    if (nx < 1 || ny < 1 || nz < 1)
      throw std::invalid_argument("VoxelGrid: axis counts must be >= 1");
    if (!origin.finite()) throw std::invalid_argument("VoxelGrid: nonfinite origin");
  }

  std::size_t flat_index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    if (ix >= nx || iy >= ny || iz >= nz)
      throw std::out_of_range("VoxelGrid: voxel coordinate out of range");
    return ix + nx * (iy + ny * iz);
  }

  std::array<std::size_t, 3> coords_of(std::size_t index) const {
    if (index >= count()) throw std::out_of_range("VoxelGrid: flat index out of range");
    return {index % nx, (index / nx) % ny, index / (nx * ny)};
  }

  Vec3 center_of(std::size_t index) const {
    const auto c = coords_of(index);
    return center_at(c[0], c[1], c[2]);
  }

  Vec3 center_at(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return origin + pitch * Vec3{static_cast<double>(ix), static_cast<double>(iy),
                                 static_cast<double>(iz)};
  }

  /// Voxel whose center is nearest to p (p clamped into the grid box).
  std::size_t nearest_index(const Vec3& p) const {
    auto clamp_axis = [&](double v, std::size_t n) {
      const double i = std::round(v);
      if (i < 0.0) return std::size_t{0};
      if (i >= static_cast<double>(n)) return n - 1;
      return static_cast<std::size_t>(i);
    };
    const Vec3 rel = (p - origin) / pitch;
    return flat_index(clamp_axis(rel.x, nx), clamp_axis(rel.y, ny), clamp_axis(rel.z, nz));
  }
};

}  // namespace vltm
