#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vltm/impulse.hpp"
#include "vltm/relay.hpp"
#include "vltm/time_axis.hpp"
#include "vltm/vec3.hpp"

namespace vltm {

struct Material {
  enum class Kind { Lambertian, Phong };
  Kind kind = Kind::Lambertian;
  double phong_exponent = 0.0;  // only meaningful for Phong

  static Material lambertian() { return {Kind::Lambertian, 0.0}; }
  static Material phong(double exponent) { return {Kind::Phong, exponent}; }
};

/// Point-like planar scatterer with an area weight. Patches are deliberately
/// not meshes: every light path through them stays analytically enumerable.
struct Patch {
  Vec3 center;
  Vec3 normal;
  double area = 0.0;    // m^2
  double albedo = 0.0;  // [0, 1]
  Material material;

  void validate() const {
    if (!center.finite() || !normal.finite())
      throw std::invalid_argument("Patch: nonfinite geometry");
    if (std::abs(normal.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("Patch: normal must be unit length");
    if (!(area > 0.0)) throw std::invalid_argument("Patch: area must be positive");
    if (!(albedo >= 0.0 && albedo <= 1.0))
      throw std::invalid_argument("Patch: albedo must be in [0, 1]");
    if (material.kind == Material::Kind::Phong && !(material.phong_exponent >= 0.0))
      throw std::invalid_argument("Patch: Phong exponent must be >= 0");
  }

  /// Radius of the equal-area disk used for occlusion tests.
  double disk_radius() const { return std::sqrt(area / M_PI); }
};

/// Poisson photon-count noise: each bin becomes Poisson(scale * value) / scale.
struct NoiseSpec {
  double scale = 0.0;  // expected photons per unit flux
  std::uint64_t seed = 0;
};

/// Analytic hidden scene plus the capture topology used to simulate it.
struct SceneDescription {
  std::vector<Patch> patches;
  RelayTopology relay;
  TimeAxis time_axis;
  int max_bounces = 3;  // scene-surface bounces between the two wall hits
  std::optional<NoiseSpec> noise;

  void validate() const {
    relay.validate();
    time_axis.validate();
    for (const Patch& p : patches) p.validate();
    if (max_bounces < 1) throw std::invalid_argument("SceneDescription: max_bounces must be >= 1");
    if (noise && !(noise->scale > 0.0))
      throw std::invalid_argument("SceneDescription: noise scale must be positive");
  }
};

}  // namespace vltm
