#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "vltm/errors.hpp"
#include "vltm/scene.hpp"
#include "vltm/vec3.hpp"

namespace vltm::io {

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& context) {
  if (!obj.is_object()) throw config_error(context + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) throw config_error(context + ": unknown key \"" + key + "\"");
  }
}

inline const json& require_key(const json& obj, const char* key, const std::string& context) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw config_error(context + ": missing key \"" + key + "\"");
  return *it;
}

inline double get_number(const json& v, const std::string& context) {
  if (!v.is_number()) throw config_error(context + ": expected a number");
  return v.get<double>();
}

inline std::size_t get_count(const json& v, const std::string& context) {
  if (!v.is_number_unsigned()) throw config_error(context + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

inline Vec3 get_vec3(const json& v, const std::string& context) {
  if (!v.is_array() || v.size() != 3)
    throw config_error(context + ": expected an array of 3 numbers");
  return {get_number(v[0], context), get_number(v[1], context), get_number(v[2], context)};
}

inline json parse_file(const std::string& path, const std::string& what) {
  std::ifstream is(path);
  if (!is) throw config_error(what + ": cannot open " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw config_error(what + " " + path + ": " + e.what());
  }
}

/// Uniform grid of points on the wall plane: `counts` cells per tangent
/// axis over the full `extent`, one point per cell center.
inline std::vector<Vec3> wall_grid_points(const Vec3& center, const Vec3& wall_normal,
                                          double extent_u, double extent_v, std::size_t count_u,
                                          std::size_t count_v) {
  Vec3 u, v;
  tangent_basis(wall_normal, u, v);
  const double su = extent_u / static_cast<double>(count_u);
  const double sv = extent_v / static_cast<double>(count_v);
  std::vector<Vec3> points;
  points.reserve(count_u * count_v);
  for (std::size_t iv = 0; iv < count_v; ++iv)
    for (std::size_t iu = 0; iu < count_u; ++iu) {
      const double du = (static_cast<double>(iu) + 0.5 - static_cast<double>(count_u) / 2.0) * su;
      const double dv = (static_cast<double>(iv) + 0.5 - static_cast<double>(count_v) / 2.0) * sv;
      points.push_back(center + du * u + dv * v);
    }
  return points;
}

inline std::vector<Vec3> parse_point_set(const json& relay, const Vec3& wall_normal,
                                         const char* points_key, const char* grid_key,
                                         const std::string& context) {
  const bool has_points = relay.contains(points_key);
  const bool has_grid = relay.contains(grid_key);
  if (has_points == has_grid)
    throw config_error(context + ": provide exactly one of \"" + points_key + "\" and \"" +
                       grid_key + "\"");
  if (has_points) {
    const json& arr = relay[points_key];
    if (!arr.is_array() || arr.empty())
      throw config_error(context + ": \"" + points_key + "\" must be a nonempty array");
    std::vector<Vec3> points;
    points.reserve(arr.size());
    for (const json& p : arr) points.push_back(get_vec3(p, context + "." + points_key));
    return points;
  }
  const json& grid = relay[grid_key];
  const std::string gctx = context + "." + grid_key;
  check_keys(grid, {"center", "extent", "counts"}, gctx);
  const Vec3 center = get_vec3(require_key(grid, "center", gctx), gctx + ".center");
  const json& extent = require_key(grid, "extent", gctx);
  const json& counts = require_key(grid, "counts", gctx);
  if (!extent.is_array() || extent.size() != 2)
    throw config_error(gctx + ".extent: expected an array of 2 numbers");
  if (!counts.is_array() || counts.size() != 2)
    throw config_error(gctx + ".counts: expected an array of 2 integers");
  const double eu = get_number(extent[0], gctx + ".extent");
  const double ev = get_number(extent[1], gctx + ".extent");
  const std::size_t cu = get_count(counts[0], gctx + ".counts");
  const std::size_t cv = get_count(counts[1], gctx + ".counts");
  if (!(eu > 0.0) || !(ev > 0.0)) throw config_error(gctx + ".extent: entries must be positive");
  if (cu < 1 || cv < 1) throw config_error(gctx + ".counts: entries must be >= 1");
  return wall_grid_points(center, wall_normal, eu, ev, cu, cv);
}

inline Material parse_material(const json& m, const std::string& context) {
  if (m.is_string()) {
    if (m.get<std::string>() == "lambertian") return Material::lambertian();
    throw config_error(context + ": unknown material \"" + m.get<std::string>() + "\"");
  }
  if (m.is_object()) {
    check_keys(m, {"phong_exponent"}, context);
    return Material::phong(get_number(require_key(m, "phong_exponent", context), context));
  }
  throw config_error(context + ": expected \"lambertian\" or {\"phong_exponent\": e}");
}

}  // namespace detail

/// Parse a SceneDescription from its JSON form. Unknown keys are rejected
/// at every level; type-level invariants are enforced by validate().
inline SceneDescription parse_scene(const nlohmann::json& root) {
  using detail::check_keys;
  using detail::get_count;
  using detail::get_number;
  using detail::get_vec3;
  using detail::require_key;

  check_keys(root, {"relay", "time", "patches", "max_bounces", "noise"}, "scene");
  SceneDescription scene;

  const nlohmann::json& relay = require_key(root, "relay", "scene");
  check_keys(relay, {"wall_normal", "laser_points", "laser_grid", "spad_points", "spad_grid"},
             "scene.relay");
  scene.relay.wall_normal = get_vec3(require_key(relay, "wall_normal", "scene.relay"),
                                     "scene.relay.wall_normal");
  scene.relay.laser_points = detail::parse_point_set(relay, scene.relay.wall_normal,
                                                     "laser_points", "laser_grid", "scene.relay");
  scene.relay.spad_points = detail::parse_point_set(relay, scene.relay.wall_normal, "spad_points",
                                                    "spad_grid", "scene.relay");

  const nlohmann::json& time = require_key(root, "time", "scene");
  check_keys(time, {"bin_width", "bin_count", "origin"}, "scene.time");
  scene.time_axis.bin_width =
      time.contains("bin_width") ? get_number(time["bin_width"], "scene.time.bin_width") : 85e-12;
  scene.time_axis.bin_count = get_count(require_key(time, "bin_count", "scene.time"),
                                        "scene.time.bin_count");
  scene.time_axis.origin =
      time.contains("origin") ? get_number(time["origin"], "scene.time.origin") : 0.0;

  if (root.contains("max_bounces")) {
    const nlohmann::json& mb = root["max_bounces"];
    if (!mb.is_number_integer())
      throw config_error("scene.max_bounces: expected an integer");
    scene.max_bounces = mb.get<int>();
  }

  const nlohmann::json& patches = require_key(root, "patches", "scene");
  if (!patches.is_array()) throw config_error("scene.patches: expected an array");
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const std::string pctx = "scene.patches[" + std::to_string(i) + "]";
    const nlohmann::json& p = patches[i];
    check_keys(p, {"center", "normal", "area", "albedo", "material"}, pctx);
    Patch patch;
    patch.center = get_vec3(require_key(p, "center", pctx), pctx + ".center");
    patch.normal = get_vec3(require_key(p, "normal", pctx), pctx + ".normal");
    patch.area = get_number(require_key(p, "area", pctx), pctx + ".area");
    patch.albedo = get_number(require_key(p, "albedo", pctx), pctx + ".albedo");
    if (p.contains("material")) patch.material = detail::parse_material(p["material"], pctx + ".material");
    scene.patches.push_back(patch);
  }

  if (root.contains("noise")) {
    const nlohmann::json& noise = root["noise"];
    check_keys(noise, {"scale", "seed"}, "scene.noise");
    NoiseSpec spec;
    spec.scale = get_number(require_key(noise, "scale", "scene.noise"), "scene.noise.scale");
    const nlohmann::json& seed = require_key(noise, "seed", "scene.noise");
    if (!seed.is_number_unsigned()) throw config_error("scene.noise.seed: expected a nonnegative integer");
    spec.seed = seed.get<std::uint64_t>();
    scene.noise = spec;
  }

  try {
    scene.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("scene: ") + e.what());
  }
  return scene;
}

inline SceneDescription load_scene(const std::string& path) {
  return parse_scene(detail::parse_file(path, "scene file"));
}

}  // namespace vltm::io
