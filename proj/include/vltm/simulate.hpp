#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "vltm/impulse.hpp"
#include "vltm/parallel.hpp"
#include "vltm/scene.hpp"
#include "vltm/vec3.hpp"

namespace vltm {

inline constexpr double speed_of_light = 299792458.0;  // m/s

/// BRDF value for light arriving from `incoming` and leaving toward
/// `outgoing` (both unit vectors pointing away from the surface). Returns 0
/// when either direction is at or below the surface's hemisphere.
inline double brdf_eval(const Material& material, double albedo, const Vec3& incoming,
                        const Vec3& outgoing, const Vec3& normal) {
  if (normal.dot(incoming) <= 0.0 || normal.dot(outgoing) <= 0.0) return 0.0;
  switch (material.kind) {
    case Material::Kind::Lambertian:
      return albedo / M_PI;
    case Material::Kind::Phong: {
      const double e = material.phong_exponent;
      const double lobe = std::max(0.0, reflect(incoming, normal).dot(outgoing));
      return albedo * (e + 2.0) / (2.0 * M_PI) * std::pow(lobe, e);
    }
  }
  return 0.0;
}

struct SimulationResult {
  ImpulseResponse response;
  std::uint64_t truncated_paths = 0;  // contributions past the time axis
};

namespace detail {

/// cos-cos/r^2 geometric coupling between two surface points, clamped to 0
/// when either endpoint faces away.
inline double geometry_term(const Vec3& a, const Vec3& na, const Vec3& b, const Vec3& nb) {
  const Vec3 d = b - a;
  const double r2 = d.norm2();
  if (r2 <= 0.0) return 0.0;
  const double inv_r = 1.0 / std::sqrt(r2);
  const double cos_a = na.dot(d) * inv_r;
  const double cos_b = nb.dot(-1.0 * d) * inv_r;
  if (cos_a <= 0.0 || cos_b <= 0.0) return 0.0;
  return cos_a * cos_b / r2;
}

/// True when segment a->b crosses the equal-area disk of any patch other
/// than the two endpoint patches (indices -1 for wall endpoints).
inline bool segment_blocked(const Vec3& a, const Vec3& b, const std::vector<Patch>& patches,
                            std::ptrdiff_t skip_a, std::ptrdiff_t skip_b) {
  const Vec3 d = b - a;
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(patches.size()); ++p) {
    if (p == skip_a || p == skip_b) continue;
    const Patch& patch = patches[p];
    const double denom = patch.normal.dot(d);
    if (std::abs(denom) < 1e-15) continue;  // parallel to the disk plane
    const double tau = patch.normal.dot(patch.center - a) / denom;
    if (tau <= 1e-9 || tau >= 1.0 - 1e-9) continue;
    const Vec3 hit = a + tau * d;
    if ((hit - patch.center).norm2() <= patch.disk_radius() * patch.disk_radius()) return true;
  }
  return false;
}

}  // namespace detail

/// Brute-force transient path sum: for each (laser, SPAD) pair, enumerate
/// every ordered patch sequence <x_l, v_1, ..., v_m, x_s> with
/// 1 <= m <= max_bounces and v_{j+1} != v_j, and deposit its throughput into
/// the bin of its total path length / c. Deterministic: pairs, bounce counts
/// and sequences are visited in a fixed lexicographic order and each pair's
/// histogram is accumulated in double before the binary32 store.
inline SimulationResult simulate_impulse_response(const SceneDescription& scene,
                                                  unsigned threads = 1) {
  scene.validate();
  for (const Patch& p : scene.patches)
    if (!(scene.relay.height_above_wall(p.center) > 0.0))
      throw std::invalid_argument("simulate_impulse_response: patch behind the relay wall");

  SimulationResult result{ImpulseResponse(scene.relay, scene.time_axis), 0};
  const std::size_t n_laser = scene.relay.laser_count();
  const std::size_t n_spad = scene.relay.spad_count();
  const std::size_t n_bins = scene.time_axis.bin_count;
  const std::size_t n_patch = scene.patches.size();
  if (n_patch == 0) return result;

  const Vec3 wall_n = scene.relay.wall_normal;
  std::vector<std::uint64_t> truncated_per_pair(n_laser * n_spad, 0);

  parallel_for(n_laser * n_spad, threads, [&](std::size_t pair) {
    const std::size_t l = pair / n_spad;
    const std::size_t s = pair % n_spad;
    const Vec3 x_l = scene.relay.laser_points[l];
    const Vec3 x_s = scene.relay.spad_points[s];
    std::vector<double> histogram(n_bins, 0.0);
    std::uint64_t truncated = 0;

    // One frame per path vertex: patch index, throughput accumulated up to
    // the arrival at that vertex (its BRDF not yet applied), path length so
    // far. The stack holds the current prefix <x_l, v_1, ..., v_depth>.
    struct Frame {
      std::size_t vertex;
      double arrive_weight;  // (1/pi) * prod(G segments) * prod(brdf_j * A_j) so far
      double length;
    };
    std::vector<Frame> path;
    path.reserve(static_cast<std::size_t>(scene.max_bounces));

    auto extend = [&](auto&& self) -> void {
      const Frame tail = path.back();
      const Patch& v = scene.patches[tail.vertex];
      const Vec3 prev = path.size() == 1 ? x_l : scene.patches[path[path.size() - 2].vertex].center;
      const Vec3 from_prev = (prev - v.center).normalized();

      // Close the path at the SPAD.
      {
        const double g = detail::geometry_term(v.center, v.normal, x_s, wall_n);
        if (g > 0.0 &&
            !detail::segment_blocked(v.center, x_s, scene.patches,
                                     static_cast<std::ptrdiff_t>(tail.vertex), -1)) {
          const Vec3 to_spad = (x_s - v.center).normalized();
          const double f = brdf_eval(v.material, v.albedo, from_prev, to_spad, v.normal);
          if (f > 0.0) {
            const double w = tail.arrive_weight * f * g;
            const double t = (tail.length + distance(v.center, x_s)) / speed_of_light;
            const std::ptrdiff_t bin = scene.time_axis.bin_of(t);
            if (scene.time_axis.contains_bin(bin))
              histogram[static_cast<std::size_t>(bin)] += w;
            else
              ++truncated;
          }
        }
      }
      if (path.size() >= static_cast<std::size_t>(scene.max_bounces)) return;

      for (std::size_t next = 0; next < n_patch; ++next) {
        if (next == tail.vertex) continue;
        const Patch& w_patch = scene.patches[next];
        const double g = detail::geometry_term(v.center, v.normal, w_patch.center, w_patch.normal);
        if (g <= 0.0) continue;
        if (detail::segment_blocked(v.center, w_patch.center, scene.patches,
                                    static_cast<std::ptrdiff_t>(tail.vertex),
                                    static_cast<std::ptrdiff_t>(next)))
          continue;
        const Vec3 to_next = (w_patch.center - v.center).normalized();
        const double f = brdf_eval(v.material, v.albedo, from_prev, to_next, v.normal);
        if (f <= 0.0) continue;
        path.push_back(Frame{next, tail.arrive_weight * f * g * w_patch.area,
                             tail.length + distance(v.center, w_patch.center)});
        self(self);
        path.pop_back();
      }
    };

    for (std::size_t first = 0; first < n_patch; ++first) {
      const Patch& v = scene.patches[first];
      const double g = detail::geometry_term(x_l, wall_n, v.center, v.normal);
      if (g <= 0.0) continue;
      if (detail::segment_blocked(x_l, v.center, scene.patches, -1,
                                  static_cast<std::ptrdiff_t>(first)))
        continue;
      path.push_back(Frame{first, (1.0 / M_PI) * g * v.area, distance(x_l, v.center)});
      extend(extend);
      path.pop_back();
    }

    double* out = result.response.data.data() + result.response.index(l, s, 0);
    for (std::size_t i = 0; i < n_bins; ++i) out[i] = histogram[i];
    truncated_per_pair[pair] = truncated;
  });

  for (std::uint64_t t : truncated_per_pair) result.truncated_paths += t;
  return result;
}

/// Poisson photon-count noise: every bin is replaced by
/// Poisson(scale * value) / scale, drawn from a generator seeded with
/// spec.seed, bins visited in storage order. Zero bins stay exactly zero.
inline ImpulseResponse apply_noise(const ImpulseResponse& h, const NoiseSpec& spec) {
  if (!(spec.scale > 0.0)) throw std::invalid_argument("apply_noise: scale must be positive");
  ImpulseResponse out = h;
  std::mt19937_64 rng(spec.seed);
  for (double& v : out.data) {
    if (v <= 0.0) continue;
    std::poisson_distribution<long long> photons(spec.scale * v);
    v = static_cast<double>(photons(rng)) / spec.scale;
  }
  return out;
}

}  // namespace vltm
