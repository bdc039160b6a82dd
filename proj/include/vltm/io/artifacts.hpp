#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "vltm/errors.hpp"
#include "vltm/io/binary.hpp"
#include "vltm/ltm.hpp"
#include "vltm/voxel_grid.hpp"

namespace vltm::io {

inline constexpr char ndir_magic[5] = "NDIR";
inline constexpr char nmsk_magic[5] = "NMSK";
inline constexpr char nltm_magic[5] = "NLTM";
inline constexpr std::uint32_t artifact_version = 1;

namespace detail {

inline void put_grid(std::ostream& os, const VoxelGrid& g) {
  put_f64(os, g.origin.x);
  put_f64(os, g.origin.y);
  put_f64(os, g.origin.z);
  put_u32(os, static_cast<std::uint32_t>(g.nx));
  put_u32(os, static_cast<std::uint32_t>(g.ny));
  put_u32(os, static_cast<std::uint32_t>(g.nz));
  put_f64(os, g.pitch);
}

inline VoxelGrid get_grid(std::istream& is, const std::string& ctx) {
  VoxelGrid g;
  g.origin = {get_f64(is, ctx), get_f64(is, ctx), get_f64(is, ctx)};
  g.nx = get_u32(is, ctx);
  g.ny = get_u32(is, ctx);
  g.nz = get_u32(is, ctx);
  g.pitch = get_f64(is, ctx);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw format_error(format_error::kind::bad_value, ctx + ": " + e.what());
  }
  return g;
}

inline std::uint32_t get_version(std::istream& is, const std::string& ctx) {
  const std::uint32_t version = get_u32(is, ctx);
  if (version != artifact_version)
    throw format_error(format_error::kind::bad_version,
                       ctx + ": unsupported version " + std::to_string(version));
  return version;
}

inline std::string replace_extension(const std::string& path, const std::string& new_ext) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + new_ext;
  return path.substr(0, dot) + new_ext;
}

}  // namespace detail

/// Binary direct-image artifact: magic "NDIR", version, grid, K_v binary64
/// values.
inline void write_direct_image(const DirectImage& img, const std::string& path) {
  img.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_direct_image: cannot open " + path);
  put_magic(os, ndir_magic);
  put_u32(os, artifact_version);
  detail::put_grid(os, img.grid);
  for (double v : img.values) put_f64(os, v);
  if (!os) throw std::runtime_error("write_direct_image: write failed for " + path);
}

inline DirectImage read_direct_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_direct_image: cannot open " + path);
  const std::string ctx = "read_direct_image(" + path + ")";
  expect_magic(is, ndir_magic, ctx);
  detail::get_version(is, ctx);
  DirectImage img;
  img.grid = detail::get_grid(is, ctx);
  img.values.resize(img.grid.count());
  for (double& v : img.values) v = get_f64(is, ctx);
  expect_eof(is, ctx);
  try {
    img.validate();
  } catch (const std::invalid_argument& e) {
    throw format_error(format_error::kind::bad_value, ctx + ": " + e.what());
  }
  return img;
}

/// Binary occupancy artifact: magic "NMSK", version, grid, epsilon, K_v
/// bytes of 0/1 bits.
inline void write_mask(const OccupancyMask& mask, const std::string& path) {
  mask.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_mask: cannot open " + path);
  put_magic(os, nmsk_magic);
  put_u32(os, artifact_version);
  detail::put_grid(os, mask.grid);
  put_f64(os, mask.epsilon);
  for (bool b : mask.bits) os.put(b ? '\1' : '\0');
  if (!os) throw std::runtime_error("write_mask: write failed for " + path);
}

inline OccupancyMask read_mask(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_mask: cannot open " + path);
  const std::string ctx = "read_mask(" + path + ")";
  expect_magic(is, nmsk_magic, ctx);
  detail::get_version(is, ctx);
  OccupancyMask mask;
  mask.grid = detail::get_grid(is, ctx);
  mask.epsilon = get_f64(is, ctx);
  mask.bits.resize(mask.grid.count());
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof())
      throw format_error(format_error::kind::bad_size, ctx + ": file truncated");
    if (c != 0 && c != 1)
      throw format_error(format_error::kind::bad_value, ctx + ": mask byte not 0 or 1");
    mask.bits[i] = (c == 1);
  }
  expect_eof(is, ctx);
  try {
    mask.validate();
  } catch (const std::invalid_argument& e) {
    throw format_error(format_error::kind::bad_value, ctx + ": " + e.what());
  }
  return mask;
}

/// Binary matrix artifact: magic "NLTM", version, kind tag, grid, column
/// count, then per column the source index and K_v binary64 values.
inline void write_matrix(const TransportMatrix& t, const std::string& path) {
  t.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_matrix: cannot open " + path);
  put_magic(os, nltm_magic);
  put_u32(os, artifact_version);
  put_u32(os, static_cast<std::uint32_t>(t.kind));
  detail::put_grid(os, t.grid);
  put_u32(os, static_cast<std::uint32_t>(t.columns.size()));
  for (const auto& [a, col] : t.columns) {
    put_u32(os, static_cast<std::uint32_t>(a));
    for (double v : col) put_f64(os, v);
  }
  if (!os) throw std::runtime_error("write_matrix: write failed for " + path);
}

inline TransportMatrix read_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_matrix: cannot open " + path);
  const std::string ctx = "read_matrix(" + path + ")";
  expect_magic(is, nltm_magic, ctx);
  detail::get_version(is, ctx);
  const std::uint32_t kind = get_u32(is, ctx);
  if (kind > static_cast<std::uint32_t>(TransportMatrix::Kind::masked))
    throw format_error(format_error::kind::bad_value, ctx + ": unknown matrix kind tag");
  TransportMatrix t;
  t.kind = static_cast<TransportMatrix::Kind>(kind);
  t.grid = detail::get_grid(is, ctx);
  const std::uint32_t n_cols = get_u32(is, ctx);
  for (std::uint32_t c = 0; c < n_cols; ++c) {
    const std::uint32_t a = get_u32(is, ctx);
    std::vector<double> col(t.grid.count());
    for (double& v : col) v = get_f64(is, ctx);
    if (!t.columns.emplace(a, std::move(col)).second)
      throw format_error(format_error::kind::bad_value, ctx + ": duplicate column source index");
  }
  expect_eof(is, ctx);
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw format_error(format_error::kind::bad_value, ctx + ": " + e.what());
  }
  return t;
}

/// Maximum-intensity projection of a voxel array along one grid axis,
/// written as 8-bit binary PGM. Columns follow the lowest remaining axis,
/// rows the highest, with the top row at the highest coordinate so "up" in
/// the hidden volume is up in the image. Values are scaled linearly
/// so the array maximum maps to 255 (all black when the maximum is 0); the
/// scale is recorded in a .norm.txt sidecar next to the image.
inline void export_image(const std::vector<double>& values, const VoxelGrid& grid,
                         std::size_t projection_axis, const std::string& path) {
  grid.validate();
  if (projection_axis > 2) throw std::invalid_argument("export_image: projection axis must be 0..2");
  if (values.size() != grid.count())
    throw std::invalid_argument("export_image: value count != voxel count");

  const std::size_t counts[3] = {grid.nx, grid.ny, grid.nz};
  const std::size_t col_axis = projection_axis == 0 ? 1 : 0;
  const std::size_t row_axis = projection_axis == 2 ? 1 : 2;
  const std::size_t n_cols = counts[col_axis];
  const std::size_t n_rows = counts[row_axis];
  const std::size_t n_depth = counts[projection_axis];

  double peak = 0.0;
  for (double v : values) peak = std::max(peak, v);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("export_image: cannot open " + path);
  os << "P5\n" << n_cols << " " << n_rows << "\n255\n";
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::size_t row_coord = n_rows - 1 - r;
    for (std::size_t c = 0; c < n_cols; ++c) {
      double best = 0.0;
      for (std::size_t d = 0; d < n_depth; ++d) {
        std::size_t coord[3];
        coord[projection_axis] = d;
        coord[col_axis] = c;
        coord[row_axis] = row_coord;
        best = std::max(best, values[grid.flat_index(coord[0], coord[1], coord[2])]);
      }
      const long level = peak > 0.0 ? std::lround(best / peak * 255.0) : 0;
      os.put(static_cast<char>(std::min(255L, std::max(0L, level))));
    }
  }
  if (!os) throw std::runtime_error("export_image: write failed for " + path);

  std::ofstream sidecar(detail::replace_extension(path, ".norm.txt"), std::ios::trunc);
  if (!sidecar) throw std::runtime_error("export_image: cannot open sidecar for " + path);
  char line[64];
  std::snprintf(line, sizeof(line), "normalization_max = %.17g\n", peak);
  sidecar << line;
}

/// CSV view of the nonzero matrix entries, ascending (a, b), full binary64
/// precision; the binary companion (same stem, .nltm) carries the exact
/// matrix for round-tripping.
inline void export_matrix(const TransportMatrix& t, const std::string& csv_path) {
  t.validate();
  std::ofstream os(csv_path, std::ios::trunc);
  if (!os) throw std::runtime_error("export_matrix: cannot open " + csv_path);
  os << "a,b,value\n";
  char line[96];
  for (const auto& [a, col] : t.columns) {
    for (std::size_t b = 0; b < col.size(); ++b) {
      if (col[b] == 0.0) continue;
      std::snprintf(line, sizeof(line), "%zu,%zu,%.17g\n", a, b, col[b]);
      os << line;
    }
  }
  if (!os) throw std::runtime_error("export_matrix: write failed for " + csv_path);
  write_matrix(t, detail::replace_extension(csv_path, ".nltm"));
}

}  // namespace vltm::io
