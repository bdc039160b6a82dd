#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vltm/imaging.hpp"
#include "vltm/impulse.hpp"
#include "vltm/parallel.hpp"
#include "vltm/voxel_grid.hpp"
#include "vltm/wave.hpp"

namespace vltm {

/// Diagonal probe image I_d over a voxel grid; values are relative (the
/// imaging operator is unnormalized) and nonnegative.
struct DirectImage {
  VoxelGrid grid;
  std::vector<double> values;

  void validate() const {
    grid.validate();
    if (values.size() != grid.count())
      throw std::invalid_argument("DirectImage: value count != voxel count");
    for (double v : values)
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("DirectImage: values must be finite and nonnegative");
  }

  std::size_t argmax() const {
    return static_cast<std::size_t>(
        std::distance(values.begin(), std::max_element(values.begin(), values.end())));
  }
};

/// Occupancy oracle: voxels whose direct-image value strictly exceeds the
/// recorded threshold.
struct OccupancyMask {
  VoxelGrid grid;
  std::vector<bool> bits;
  double epsilon = 0.0;

  std::size_t occupied_count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
  }

  void validate() const {
    grid.validate();
    if (bits.size() != grid.count())
      throw std::invalid_argument("OccupancyMask: bit count != voxel count");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("OccupancyMask: epsilon must be >= 0");
  }
};

/// Boolean outer product M = m ⊗ m, stored factored (the full K_v x K_v
/// matrix is determined by the vector, so materializing it would only burn
/// memory). M(a,b) = bits[a] AND bits[b].
struct OuterProductMask {
  std::vector<bool> bits;

  bool at(std::size_t a, std::size_t b) const { return bits[a] && bits[b]; }
  std::size_t dim() const { return bits.size(); }

  OuterProductMask and_with(const OuterProductMask& o) const {
    if (o.bits.size() != bits.size())
      throw std::invalid_argument("OuterProductMask: dimension mismatch");
    OuterProductMask out{bits};
    for (std::size_t i = 0; i < bits.size(); ++i) out.bits[i] = bits[i] && o.bits[i];
    return out;
  }
};

/// Column-sparse virtual light transport matrix: dense columns only for the
/// probed source voxels.
struct TransportMatrix {
  enum class Kind { naive, gated_2bounce, gated_higher, masked };

  VoxelGrid grid;
  Kind kind = Kind::naive;
  std::map<std::size_t, std::vector<double>> columns;  // source index -> dense column

  double at(std::size_t a, std::size_t b) const {
    const auto it = columns.find(a);
    if (it == columns.end()) return 0.0;
    return it->second.at(b);
  }

  double total_energy() const {
    double sum = 0.0;
    for (const auto& [a, col] : columns)
      for (double v : col) sum += v;
    return sum;
  }

  std::size_t stored_nonzeros() const {
    std::size_t n = 0;
    for (const auto& [a, col] : columns)
      for (double v : col)
        if (v != 0.0) ++n;
    return n;
  }

  void validate() const {
    grid.validate();
    for (const auto& [a, col] : columns) {
      if (a >= grid.count()) throw std::invalid_argument("TransportMatrix: source index out of range");
      if (col.size() != grid.count())
        throw std::invalid_argument("TransportMatrix: column length != voxel count");
      for (double v : col)
        if (!std::isfinite(v) || v < 0.0)
          throw std::invalid_argument("TransportMatrix: entries must be finite and nonnegative");
    }
  }
};

namespace detail {

/// The grid's center box is an axis-aligned hull; height above the wall is
/// linear, so checking the 8 extreme voxel centers bounds every voxel.
inline void require_grid_in_front(const RelayTopology& topology, const VoxelGrid& grid) {
  for (std::size_t corner = 0; corner < 8; ++corner) {
    const Vec3 c = grid.center_at((corner & 1) ? grid.nx - 1 : 0, (corner & 2) ? grid.ny - 1 : 0,
                                  (corner & 4) ? grid.nz - 1 : 0);
    if (!(topology.height_above_wall(c) > 0.0))
      throw std::invalid_argument("voxel grid extends behind the relay wall");
  }
}

}  // namespace detail

/// Diagonal of the gated LTM: image every voxel with direct illumination
/// focused on it (confocal probing).
inline DirectImage compute_direct(const ImagingContext& ctx, const VoxelGrid& grid,
                                  unsigned threads = 1, double gate_time_offset = 0.0) {
  grid.validate();
  detail::require_grid_in_front(ctx.topology(), grid);
  DirectImage img{grid, std::vector<double>(grid.count(), 0.0)};
  parallel_for(grid.count(), threads, [&](std::size_t v) {
    img.values[v] = ctx.direct_value(grid.center_of(v), gate_time_offset);
  });
  return img;
}

inline DirectImage compute_direct(const ImpulseResponse& h, const VoxelGrid& grid,
                                  const WaveParams& params, unsigned threads = 1,
                                  double gate_time_offset = 0.0) {
  return compute_direct(ImagingContext(h, params, threads), grid, threads, gate_time_offset);
}

/// One LTM column: indirect illumination focused at source voxel a, imaged
/// at every voxel b. The degenerate entry b = a evaluates with t_i4 = t_d
/// and therefore reproduces the diagonal probe exactly.
inline std::vector<double> compute_column(const ImagingContext& ctx, const VoxelGrid& grid,
                                          std::size_t a, GateKind gate_kind = GateKind::Gaussian,
                                          unsigned threads = 1, double gate_time_offset = 0.0) {
  grid.validate();
  if (a >= grid.count()) throw std::invalid_argument("compute_column: source index out of range");
  const Vec3 x_a = grid.center_of(a);
  std::vector<double> column(grid.count(), 0.0);
  parallel_for(grid.count(), threads, [&](std::size_t b) {
    column[b] = ctx.indirect_value(x_a, grid.center_of(b), gate_kind, gate_time_offset);
  });
  return column;
}

inline std::vector<double> compute_column(const ImpulseResponse& h, const VoxelGrid& grid,
                                          const WaveParams& params, std::size_t a,
                                          GateKind gate_kind = GateKind::Gaussian,
                                          unsigned threads = 1, double gate_time_offset = 0.0) {
  return compute_column(ImagingContext(h, params, threads), grid, a, gate_kind, threads,
                        gate_time_offset);
}

/// Occupancy oracle Γ = { v | I_d(v) > ε } (strict inequality).
inline OccupancyMask occupancy_from_direct(const DirectImage& img, double epsilon) {
  img.validate();
  if (!(epsilon >= 0.0)) throw std::invalid_argument("occupancy_from_direct: epsilon must be >= 0");
  OccupancyMask mask{img.grid, std::vector<bool>(img.values.size(), false), epsilon};
  for (std::size_t v = 0; v < img.values.size(); ++v) mask.bits[v] = img.values[v] > epsilon;
  return mask;
}

/// Relative threshold: ε = rho * max(I_d). The 0.05 default keeps the mask
/// scale-free under the unnormalized image model.
inline double relative_epsilon(const DirectImage& img, double rho = 0.05) {
  if (!(rho >= 0.0)) throw std::invalid_argument("relative_epsilon: rho must be >= 0");
  double m = 0.0;
  for (double v : img.values) m = std::max(m, v);
  return rho * m;
}

inline OuterProductMask mask_outer(const OccupancyMask& mask) {
  mask.validate();
  return OuterProductMask{mask.bits};
}

/// In-focus indirect accumulation: I_i(b) = Σ_{a ∈ Γ, a ≠ b} T(a, b) for
/// occupied b, 0 elsewhere. Sources are visited in ascending voxel order so
/// the summation is reproducible.
inline DirectImage accumulate_in_focus_indirect(const ImagingContext& ctx, const VoxelGrid& grid,
                                                const OccupancyMask& mask, unsigned threads = 1,
                                                GateKind gate_kind = GateKind::Gaussian) {
  grid.validate();
  mask.validate();
  if (mask.bits.size() != grid.count())
    throw std::invalid_argument("accumulate_in_focus_indirect: mask grid mismatch");
  DirectImage out{grid, std::vector<double>(grid.count(), 0.0)};

  std::vector<std::size_t> occupied;
  for (std::size_t v = 0; v < mask.bits.size(); ++v)
    if (mask.bits[v]) occupied.push_back(v);

  for (std::size_t a : occupied) {
    const Vec3 x_a = grid.center_of(a);
    parallel_for(occupied.size(), threads, [&](std::size_t bi) {
      const std::size_t b = occupied[bi];
      if (b == a) return;
      out.values[b] += ctx.indirect_value(x_a, grid.center_of(b), gate_kind);
    });
  }
  return out;
}

inline DirectImage accumulate_in_focus_indirect(const ImpulseResponse& h, const VoxelGrid& grid,
                                                const WaveParams& params, const OccupancyMask& mask,
                                                unsigned threads = 1,
                                                GateKind gate_kind = GateKind::Gaussian) {
  return accumulate_in_focus_indirect(ImagingContext(h, params, threads), grid, mask, threads,
                                      gate_kind);
}

/// Half-open source-to-destination distance range [d_min, d_max) in meters.
struct BandInterval {
  double d_min = 0.0;
  double d_max = 0.0;
};

/// Split a matrix by the Euclidean distance between the voxel centers of
/// each element: element (a,b) goes to the interval containing ||x_b - x_a||;
/// elements outside every interval are dropped. Values are copied untouched,
/// so any partition of [0, inf) reassembles the input exactly.
inline std::vector<TransportMatrix> band_decompose(const TransportMatrix& t,
                                                   const std::vector<BandInterval>& intervals) {
  t.grid.validate();
  for (const BandInterval& b : intervals)
    if (!(b.d_min >= 0.0) || !(b.d_max > b.d_min))
      throw std::invalid_argument("band_decompose: intervals need 0 <= d_min < d_max");
  for (std::size_t i = 0; i < intervals.size(); ++i)
    for (std::size_t j = i + 1; j < intervals.size(); ++j) {
      const bool disjoint = intervals[i].d_max <= intervals[j].d_min ||
                            intervals[j].d_max <= intervals[i].d_min;
      if (!disjoint) throw std::invalid_argument("band_decompose: intervals overlap");
    }

  std::vector<TransportMatrix> bands(intervals.size());
  for (TransportMatrix& b : bands) {
    b.grid = t.grid;
    b.kind = t.kind;
  }
  for (const auto& [a, col] : t.columns) {
    const Vec3 x_a = t.grid.center_of(a);
    std::vector<std::vector<double>*> dest(intervals.size(), nullptr);
    for (std::size_t i = 0; i < intervals.size(); ++i)
      dest[i] = &bands[i].columns.emplace(a, std::vector<double>(col.size(), 0.0)).first->second;
    for (std::size_t b = 0; b < col.size(); ++b) {
      const double d = distance(x_a, t.grid.center_of(b));
      for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (d >= intervals[i].d_min && d < intervals[i].d_max) {
          (*dest[i])[b] = col[b];
          break;
        }
      }
    }
  }
  return bands;
}

/// Probe the LTM column by column. Diagonal entries come from the direct
/// (confocal) probe; a provided mask skips unoccupied sources and zeroes
/// unoccupied destinations, yielding kind = masked.
inline TransportMatrix assemble_ltm(const ImagingContext& ctx, const VoxelGrid& grid,
                                    const std::vector<std::size_t>& sources, GateKind gate_kind,
                                    const OccupancyMask* mask = nullptr, unsigned threads = 1) {
  grid.validate();
  if (sources.empty()) throw std::invalid_argument("assemble_ltm: no source voxels requested");
  if (mask) {
    mask->validate();
    if (mask->bits.size() != grid.count())
      throw std::invalid_argument("assemble_ltm: mask grid mismatch");
  }

  TransportMatrix t;
  t.grid = grid;
  t.kind = mask ? TransportMatrix::Kind::masked
                : (gate_kind == GateKind::Gaussian ? TransportMatrix::Kind::gated_2bounce
                                                   : TransportMatrix::Kind::gated_higher);

  std::vector<std::size_t> ordered = sources;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  for (std::size_t a : ordered) {
    if (a >= grid.count()) throw std::invalid_argument("assemble_ltm: source index out of range");
    if (mask && !mask->bits[a]) continue;
    std::vector<double> col = compute_column(ctx, grid, a, gate_kind, threads);
    col[a] = ctx.direct_value(grid.center_of(a));
    if (mask)
      for (std::size_t b = 0; b < col.size(); ++b)
        if (!mask->bits[b]) col[b] = 0.0;
    t.columns.emplace(a, std::move(col));
  }
  return t;
}

inline TransportMatrix assemble_ltm(const ImpulseResponse& h, const VoxelGrid& grid,
                                    const WaveParams& params,
                                    const std::vector<std::size_t>& sources, GateKind gate_kind,
                                    const OccupancyMask* mask = nullptr, unsigned threads = 1) {
  return assemble_ltm(ImagingContext(h, params, threads), grid, sources, gate_kind, mask, threads);
}

}  // namespace vltm
