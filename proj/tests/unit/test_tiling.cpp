// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <tuple>

#include "stencilsmith/tiling.hpp"

using namespace stencilsmith;

namespace {

std::size_t interior_volume(const WindowPlan& plan) {
  std::size_t v = 0;
  for (const WindowTile& t : plan.tiles) v += t.interior.extent.volume();
  return v;
}

}  // namespace

TEST(TileSpec, ParseAndPrint) {
  EXPECT_EQ(parse_tile("16x64x8"), (TileSpec{16, 64, 8}));
  EXPECT_EQ(to_string(TileSpec{5, 7, 3}), "5x7x3");
  EXPECT_THROW(parse_tile("16x64"), ConfigError);
}

TEST(PlanWindows, HdiffPaperTile) {
  const WindowPlan plan = plan_windows({68, 68, 64}, {16, 64, 8}, Kernel::hdiff);
  EXPECT_EQ(plan.tiles.size(), 4u * 1u * 8u);
  EXPECT_TRUE(validate_plan(plan, {68, 68, 64}).ok());
  EXPECT_EQ(interior_volume(plan), 64u * 64u * 64u);
}

TEST(PlanWindows, VadvcPaperTileSingleWindow) {
  const WindowPlan plan = plan_windows({68, 6, 64}, {64, 2, 64}, Kernel::vadvc);
  ASSERT_EQ(plan.tiles.size(), 1u);
  EXPECT_EQ(plan.tiles[0].interior, (Box3{{2, 2, 0}, {64, 2, 64}}));
  EXPECT_EQ(plan.tiles[0].halo.hi.nx, 1u);  // wcon(i+1)
  EXPECT_EQ(plan.tiles[0].halo.lo.nx, 0u);
}

TEST(PlanWindows, RaggedEdgesShrink) {
  const WindowPlan plan = plan_windows({14, 14, 4}, {4, 4, 4}, Kernel::hdiff);
  ASSERT_EQ(plan.tiles.size(), 9u);
  EXPECT_EQ(plan.tiles[2].interior.extent, (Dims3{2, 4, 4}));
  EXPECT_EQ(plan.tiles[8].interior.extent, (Dims3{2, 2, 4}));
  EXPECT_EQ(interior_volume(plan), 10u * 10u * 4u);
}

TEST(PlanWindows, OrderedByKJI) {
  const WindowPlan plan = plan_windows({20, 12, 9}, {5, 3, 4}, Kernel::copy);
  for (std::size_t t = 1; t < plan.tiles.size(); ++t) {
    const Coord3& a = plan.tiles[t - 1].interior.origin;
    const Coord3& b = plan.tiles[t].interior.origin;
    EXPECT_LT(std::tie(a.k, a.j, a.i), std::tie(b.k, b.j, b.i));
  }
}

TEST(PlanWindows, HaloClippedToGrid) {
  const WindowPlan plan = plan_windows({12, 12, 6}, {4, 4, 3}, Kernel::hdiff, {2, 2, 0});
  for (const WindowTile& t : plan.tiles) {
    EXPECT_EQ(t.halo.lo.nx, 2u);
    EXPECT_EQ(t.halo.hi.ny, 2u);
    EXPECT_EQ(t.halo.lo.nz, 0u);
  }
  const WindowPlan copy = plan_windows({12, 12, 6}, {4, 4, 3}, Kernel::copy);
  EXPECT_EQ(copy.tiles[0].read_region(), copy.tiles[0].interior);
}

TEST(PlanWindows, Errors) {
  EXPECT_THROW(plan_windows({68, 68, 64}, {65, 1, 1}, Kernel::hdiff), ConfigError);
  EXPECT_THROW(plan_windows({68, 68, 64}, {1, 1, 65}, Kernel::hdiff), ConfigError);
  EXPECT_THROW(plan_windows({68, 68, 64}, {0, 1, 1}, Kernel::hdiff), ConfigError);
  EXPECT_THROW(plan_windows({68, 68, 64}, {8, 8, 32}, Kernel::vadvc), ConfigError);
  EXPECT_THROW(plan_windows({4, 4, 4}, {1, 1, 1}, Kernel::hdiff), ConfigError);
  EXPECT_THROW(plan_windows({8, 8, 4}, {1, 1, 4}, Kernel::vadvc, {2, 2, 1}), ConfigError);
}

TEST(ValidatePlan, DetectsOverlap) {
  WindowPlan plan = plan_windows({12, 12, 2}, {4, 4, 2}, Kernel::hdiff);
  plan.tiles[1].interior.origin.i -= 1;
  plan.tiles[1].interior.extent.nx += 1;
  const PlanReport r = validate_plan(plan, {12, 12, 2});
  EXPECT_EQ(r.kind, PlanReport::Kind::overlap);
  EXPECT_EQ(*r.tile, 1u);
  EXPECT_EQ(*r.coordinate, (Coord3{5, 2, 0}));
}

TEST(ValidatePlan, DetectsMissingSlab) {
  WindowPlan plan = plan_windows({12, 12, 6}, {8, 8, 2}, Kernel::hdiff);
  plan.tiles.pop_back();  // one tile per k-slab
  const PlanReport r = validate_plan(plan, {12, 12, 6});
  EXPECT_EQ(r.kind, PlanReport::Kind::coverage);
  EXPECT_EQ(r.coordinate->k, 4u);
}

TEST(ValidatePlan, DetectsContainmentOrderingAndMismatch) {
  WindowPlan plan = plan_windows({12, 12, 2}, {4, 4, 2}, Kernel::hdiff);
  EXPECT_EQ(validate_plan(plan, {12, 12, 3}).kind, PlanReport::Kind::mismatch);

  WindowPlan outside = plan;
  outside.tiles[0].interior.origin.i = 0;
  EXPECT_EQ(validate_plan(outside, {12, 12, 2}).kind, PlanReport::Kind::containment);

  WindowPlan swapped = plan;
  std::swap(swapped.tiles[0], swapped.tiles[1]);
  EXPECT_EQ(validate_plan(swapped, {12, 12, 2}).kind, PlanReport::Kind::ordering);
}

TEST(Footprint, Examples) {
  EXPECT_EQ(tile_footprint({4, 4, 4}, Kernel::copy, 4), 512u);
  EXPECT_EQ(tile_footprint({16, 64, 8}, Kernel::hdiff, 4), 87040u);
  EXPECT_EQ(tile_footprint({64, 2, 64}, Kernel::vadvc, 4),
            2 * tile_footprint({64, 2, 64}, Kernel::vadvc, 2));
  EXPECT_EQ(tile_footprint({64, 2, 64}, Kernel::vadvc, 4), 10u * 68u * 6u * 64u * 4u);
}

// --- executor ----------------------------------------------------------------

struct ExecCase {
  Kernel kernel;
  TileSpec tile;
};

class TiledEquivalence
    : public ::testing::TestWithParam<std::tuple<ExecCase, unsigned, Precision>> {};

TEST_P(TiledEquivalence, BitwiseEqualToReference) {
  const auto [c, workers, p] = GetParam();
  const Dims3 d{36, 20, 12};
  const WindowPlan plan = plan_windows(d, c.tile, c.kernel, kStencilHalo, workers);
  ASSERT_TRUE(validate_plan(plan, d).ok());
  for (Isa isa : available_isas()) {
    if (c.kernel == Kernel::vadvc) {
      const FieldSet f = make_vadvc_fields(d, kStencilHalo, p, 4);
      EXPECT_EQ(compare(execute_tiled(f, plan, workers, {isa}), vadvc_reference(f)).max_ulp_diff, 0u);
    } else {
      const Grid3D src = make_grid(d, kStencilHalo, PseudoRandomInit{4}, p);
      const Grid3D ref = c.kernel == Kernel::hdiff ? hdiff_reference(src) : copy_reference(src);
      const Grid3D out = c.kernel == Kernel::hdiff ? execute_tiled(src, {}, plan, workers, {isa})
                                                   : execute_tiled_copy(src, plan, workers, {isa});
      EXPECT_EQ(compare(out, ref).max_ulp_diff, 0u);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Plans, TiledEquivalence,
    ::testing::Combine(::testing::Values(ExecCase{Kernel::hdiff, {32, 16, 12}},
                                         ExecCase{Kernel::hdiff, {5, 7, 3}},
                                         ExecCase{Kernel::hdiff, {1, 1, 1}},
                                         ExecCase{Kernel::vadvc, {8, 8, 12}},
                                         ExecCase{Kernel::vadvc, {5, 3, 12}},
                                         ExecCase{Kernel::copy, {7, 5, 5}}),
                       ::testing::Values(1u, 2u, 3u, 8u),
                       ::testing::Values(Precision::f32, Precision::f64)));

TEST(Executor, MorWorkersThanTiles) {
  const Grid3D src = make_grid({8, 8, 2}, kStencilHalo, PseudoRandomInit{1}, Precision::f64);
  const WindowPlan plan = plan_windows({8, 8, 2}, {4, 4, 2}, Kernel::hdiff);
  EXPECT_TRUE(compare(execute_tiled(src, {}, plan, 16), hdiff_reference(src)).bitwise_equal());
}

TEST(Executor, UncoveredPointsStayZero) {
  const Grid3D src = make_grid({12, 12, 2}, kStencilHalo, PseudoRandomInit{1}, Precision::f64);
  WindowPlan plan = plan_windows({12, 12, 2}, {4, 4, 2}, Kernel::copy);
  const Box3 dropped = plan.tiles.back().interior;
  plan.tiles.pop_back();
  const Grid3D out = execute_tiled_copy(src, plan, 2);
  EXPECT_EQ(out.at(dropped.origin.i, dropped.origin.j, 0), 0.0);
  const CompareResult r = compare(out, src);
  ASSERT_FALSE(r.bitwise_equal());
  EXPECT_EQ(*r.first_mismatch, dropped.origin);
}

TEST(Executor, PlanMismatchIsRejected) {
  const Grid3D src = make_grid({12, 12, 2}, kStencilHalo, PseudoRandomInit{1}, Precision::f64);
  const WindowPlan other = plan_windows({12, 12, 3}, {4, 4, 1}, Kernel::hdiff);
  EXPECT_THROW(execute_tiled(src, {}, other, 1), PlanError);
  const WindowPlan copy_plan = plan_windows({12, 12, 2}, {4, 4, 2}, Kernel::copy);
  EXPECT_THROW(execute_tiled(src, {}, copy_plan, 1), PlanError);
  WindowPlan escaped = plan_windows({12, 12, 2}, {4, 4, 2}, Kernel::hdiff);
  escaped.tiles[0].interior.origin.i = 0;
  EXPECT_THROW(execute_tiled(src, {}, escaped, 1), PlanError);
}

TEST(Executor, KernelErrorsSurfaceFromWorkers) {
  FieldSet f = make_vadvc_fields({20, 8, 4}, kStencilHalo, Precision::f64, 1);
  f.wcon = make_grid({20, 8, 4}, kStencilHalo, ConstantInit{0.0}, Precision::f64);
  f.dtr_stage = 0.0;
  const WindowPlan plan = plan_windows({20, 8, 4}, {4, 2, 4}, Kernel::vadvc);
  EXPECT_THROW(execute_tiled(f, plan, 4), SingularSystemError);
}

TEST(Executor, ThreadCapFromEnvironment) {
  ::setenv("STENCILSMITH_THREADS", "3", 1);
  EXPECT_EQ(effective_workers(8), 3u);
  EXPECT_EQ(effective_workers(2), 2u);
  ::setenv("STENCILSMITH_THREADS", "zero", 1);
  EXPECT_THROW(effective_workers(2), ConfigError);
  ::unsetenv("STENCILSMITH_THREADS");
  EXPECT_EQ(effective_workers(0), 1u);
  EXPECT_EQ(effective_workers(8), 8u);
}
