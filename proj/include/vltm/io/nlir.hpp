#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

#include "vltm/errors.hpp"
#include "vltm/impulse.hpp"
#include "vltm/io/binary.hpp"

namespace vltm::io {

inline constexpr char nlir_magic[5] = "NLIR";
inline constexpr std::uint32_t nlir_version = 1;

/// NLIR v1 layout (all little-endian):
///   bytes 0-3  magic "NLIR"
///   u32        version = 1
///   u32 x3     K_p, K_i, bin_count
///   f64 x2     bin width (s), origin (s)
///   f64 x3     wall normal
///   f64 x3*K_p laser positions
///   f64 x3*K_i SPAD positions
///   f32 xN     histogram, laser-major, then SPAD, then time
inline void write_nlir(const ImpulseResponse& h, const std::string& path) {
  h.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_nlir: cannot open " + path + " for writing");

  put_magic(os, nlir_magic);
  put_u32(os, nlir_version);
  put_u32(os, static_cast<std::uint32_t>(h.topology.laser_count()));
  put_u32(os, static_cast<std::uint32_t>(h.topology.spad_count()));
  put_u32(os, static_cast<std::uint32_t>(h.time_axis.bin_count));
  put_f64(os, h.time_axis.bin_width);
  put_f64(os, h.time_axis.origin);
  for (double c : {h.topology.wall_normal.x, h.topology.wall_normal.y, h.topology.wall_normal.z})
    put_f64(os, c);
  for (const Vec3& p : h.topology.laser_points)
    for (double c : {p.x, p.y, p.z}) put_f64(os, c);
  for (const Vec3& p : h.topology.spad_points)
    for (double c : {p.x, p.y, p.z}) put_f64(os, c);
  for (double v : h.data) {
    const float narrowed = static_cast<float>(v);
    if (!std::isfinite(narrowed))
      throw std::runtime_error("write_nlir: entry overflows the binary32 payload");
    put_f32(os, narrowed);
  }
  if (!os) throw std::runtime_error("write_nlir: write failed for " + path);
}

inline ImpulseResponse read_nlir(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_nlir: cannot open " + path);
  const std::string ctx = "read_nlir(" + path + ")";

  expect_magic(is, nlir_magic, ctx);
  const std::uint32_t version = get_u32(is, ctx);
  if (version != nlir_version)
    throw format_error(format_error::kind::bad_version,
                       ctx + ": unsupported version " + std::to_string(version));
  const std::uint32_t k_p = get_u32(is, ctx);
  const std::uint32_t k_i = get_u32(is, ctx);
  const std::uint32_t bins = get_u32(is, ctx);
  if (k_p == 0 || k_i == 0 || bins == 0)
    throw format_error(format_error::kind::bad_size, ctx + ": zero-sized dimension in header");

  ImpulseResponse h;
  h.time_axis.bin_width = get_f64(is, ctx);
  h.time_axis.origin = get_f64(is, ctx);
  h.time_axis.bin_count = bins;
  h.topology.wall_normal = {get_f64(is, ctx), get_f64(is, ctx), get_f64(is, ctx)};
  h.topology.laser_points.resize(k_p);
  for (Vec3& p : h.topology.laser_points) p = {get_f64(is, ctx), get_f64(is, ctx), get_f64(is, ctx)};
  h.topology.spad_points.resize(k_i);
  for (Vec3& p : h.topology.spad_points) p = {get_f64(is, ctx), get_f64(is, ctx), get_f64(is, ctx)};

  h.data.resize(static_cast<std::size_t>(k_p) * k_i * bins);
  for (double& v : h.data) v = get_f32(is, ctx);
  expect_eof(is, ctx);

  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw format_error(format_error::kind::bad_value, ctx + ": " + e.what());
  }
  return h;
}

}  // namespace vltm::io
