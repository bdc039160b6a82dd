#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "vltm/impulse.hpp"
#include "vltm/parallel.hpp"
#include "vltm/relay.hpp"
#include "vltm/time_axis.hpp"
#include "vltm/vec3.hpp"
#include "vltm/voxel_grid.hpp"

using namespace vltm;

TEST(Vec3, BasicAlgebra) {
  const Vec3 a{1.0, 2.0, 3.0};
  const Vec3 b{-1.0, 0.5, 2.0};
  EXPECT_EQ(a + b, (Vec3{0.0, 2.5, 5.0}));
  EXPECT_EQ(a - b, (Vec3{2.0, 1.5, 1.0}));
  EXPECT_DOUBLE_EQ(a.dot(b), -1.0 + 1.0 + 6.0);
  EXPECT_EQ(a.cross(b), (Vec3{2.0 * 2.0 - 3.0 * 0.5, 3.0 * -1.0 - 1.0 * 2.0, 1.0 * 0.5 - 2.0 * -1.0}));
  EXPECT_DOUBLE_EQ((Vec3{3.0, 4.0, 0.0}).norm(), 5.0);
  EXPECT_NEAR((Vec3{3.0, 4.0, 0.0}).normalized().norm(), 1.0, 1e-15);
}

TEST(Vec3, ReflectMirrorsAboutNormal) {
  const Vec3 n{0.0, 1.0, 0.0};
  const Vec3 in = Vec3{1.0, 1.0, 0.0}.normalized();
  const Vec3 r = reflect(in, n);
  EXPECT_NEAR(r.x, -in.x, 1e-15);
  EXPECT_NEAR(r.y, in.y, 1e-15);
  EXPECT_NEAR(r.z, 0.0, 1e-15);
  // Reflecting along the normal is the identity.
  const Vec3 r2 = reflect(n, n);
  EXPECT_NEAR((r2 - n).norm(), 0.0, 1e-15);
}

TEST(Vec3, TangentBasisIsOrthonormalRightHanded) {
  for (const Vec3& n : {Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0},
                        Vec3{1.0, 2.0, -0.5}.normalized(), Vec3{-1.0, 0.0, 0.0}}) {
    Vec3 u, v;
    tangent_basis(n, u, v);
    EXPECT_NEAR(u.norm(), 1.0, 1e-12);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_NEAR(u.dot(n), 0.0, 1e-12);
    EXPECT_NEAR(v.dot(n), 0.0, 1e-12);
    EXPECT_NEAR(u.dot(v), 0.0, 1e-12);
    EXPECT_NEAR((u.cross(v) - n).norm(), 0.0, 1e-12);
  }
}

TEST(TimeAxis, BinMappingAndCenters) {
  const TimeAxis axis{1e-10, 64, 2e-9};
  axis.validate();
  EXPECT_DOUBLE_EQ(axis.time_at(0), 2e-9 + 0.5e-10);
  EXPECT_EQ(axis.bin_of(2e-9), 0);
  EXPECT_EQ(axis.bin_of(2e-9 + 0.99e-10), 0);
  EXPECT_EQ(axis.bin_of(2e-9 + 1e-10), 1);
  EXPECT_EQ(axis.bin_of(0.0), -20);
  EXPECT_TRUE(axis.contains_bin(0));
  EXPECT_TRUE(axis.contains_bin(63));
  EXPECT_FALSE(axis.contains_bin(64));
  EXPECT_FALSE(axis.contains_bin(-1));
}

TEST(TimeAxis, RejectsInvalid) {
  EXPECT_THROW((TimeAxis{0.0, 4, 0.0}).validate(), std::invalid_argument);
  EXPECT_THROW((TimeAxis{-1e-12, 4, 0.0}).validate(), std::invalid_argument);
  EXPECT_THROW((TimeAxis{1e-12, 0, 0.0}).validate(), std::invalid_argument);
}

namespace {

RelayTopology small_wall() {
  RelayTopology topo;
  topo.wall_normal = {0.0, 1.0, 0.0};
  topo.laser_points = {{-0.1, 0.0, 0.0}, {0.1, 0.0, 0.0}};
  topo.spad_points = {{0.0, 0.0, -0.1}, {0.0, 0.0, 0.1}};
  return topo;
}

}  // namespace

TEST(RelayTopology, ValidatesPlaneMembership) {
  RelayTopology topo = small_wall();
  EXPECT_NO_THROW(topo.validate());
  topo.spad_points.push_back({0.0, 1e-6, 0.0});
  EXPECT_THROW(topo.validate(), std::invalid_argument);
}

TEST(RelayTopology, RejectsEmptyAndNonUnitNormal) {
  RelayTopology topo = small_wall();
  topo.wall_normal = {0.0, 2.0, 0.0};
  EXPECT_THROW(topo.validate(), std::invalid_argument);
  topo = small_wall();
  topo.laser_points.clear();
  EXPECT_THROW(topo.validate(), std::invalid_argument);
}

TEST(RelayTopology, QuadratureWeightMatchesCellArea) {
  // 4x4 cell centers over a 1x1 wall: weight = (1/4)^2 per point.
  std::vector<Vec3> points;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      points.push_back({-0.375 + 0.25 * i, 0.0, -0.375 + 0.25 * j});
  EXPECT_NEAR(quadrature_weight(points, {0.0, 1.0, 0.0}), 0.0625, 1e-12);

  // 1D array: weight degenerates to the point spacing.
  std::vector<Vec3> line;
  for (int i = 0; i < 5; ++i) line.push_back({0.1 * i, 0.0, 0.0});
  EXPECT_NEAR(quadrature_weight(line, {0.0, 1.0, 0.0}), 0.1, 1e-12);

  // Single point: unit weight.
  EXPECT_DOUBLE_EQ(quadrature_weight({{0.3, 0.0, 0.2}}, {0.0, 1.0, 0.0}), 1.0);
}

TEST(ImpulseResponse, IndexingAndValidation) {
  ImpulseResponse h(small_wall(), TimeAxis{85e-12, 8, 0.0});
  EXPECT_EQ(h.data.size(), 2u * 2u * 8u);
  h.at(1, 0, 3) = 2.5;
  EXPECT_DOUBLE_EQ(h.data[(1 * 2 + 0) * 8 + 3], 2.5);
  EXPECT_NO_THROW(h.validate());
  h.at(0, 1, 0) = -1.0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
}

TEST(ImpulseResponse, DelayedShiftsPayload) {
  ImpulseResponse h(small_wall(), TimeAxis{85e-12, 4, 0.0});
  h.at(0, 0, 1) = 3.0;
  const ImpulseResponse d = h.delayed(2);
  EXPECT_EQ(d.time_axis.bin_count, 6u);
  EXPECT_DOUBLE_EQ(d.at(0, 0, 3), 3.0);
  EXPECT_DOUBLE_EQ(d.at(0, 0, 1), 0.0);
}

TEST(VoxelGrid, IndexCenterBijection) {
  const VoxelGrid grid{{0.5, 1.0, -0.25}, 3, 4, 5, 0.25};
  grid.validate();
  EXPECT_EQ(grid.count(), 60u);
  for (std::size_t v = 0; v < grid.count(); ++v) {
    const auto c = grid.coords_of(v);
    EXPECT_EQ(grid.flat_index(c[0], c[1], c[2]), v);
    EXPECT_EQ(grid.nearest_index(grid.center_of(v)), v);
  }
  EXPECT_THROW(grid.flat_index(3, 0, 0), std::out_of_range);
  EXPECT_THROW(grid.coords_of(60), std::out_of_range);
}

TEST(VoxelGrid, NearestClampsToBox) {
  const VoxelGrid grid{{0.0, 0.0, 0.0}, 2, 2, 2, 1.0};
  EXPECT_EQ(grid.nearest_index({-5.0, -5.0, -5.0}), grid.flat_index(0, 0, 0));
  EXPECT_EQ(grid.nearest_index({5.0, 5.0, 5.0}), grid.flat_index(1, 1, 1));
}

TEST(ParallelFor, MatchesSerialForAnyWorkerCount) {
  const std::size_t n = 1000;
  std::vector<double> serial(n), parallel1(n), parallel7(n);
  auto fill = [](std::vector<double>& out) {
    return [&out](std::size_t i) { out[i] = std::sin(static_cast<double>(i)) * 1.000001; };
  };
  for (std::size_t i = 0; i < n; ++i) fill(serial)(i);
  parallel_for(n, 1, fill(parallel1));
  parallel_for(n, 7, fill(parallel7));
  EXPECT_EQ(serial, parallel1);
  EXPECT_EQ(serial, parallel7);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(16, 4,
                            [](std::size_t i) {
                              if (i == 11) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
