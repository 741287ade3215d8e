// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stencilsmith/grid.hpp"
#include "stencilsmith/kernels.hpp"
#include "stencilsmith/simd.hpp"

namespace stencilsmith {

/// Tile extents in interior points.
struct TileSpec {
  std::size_t tx = 1;
  std::size_t ty = 1;
  std::size_t tz = 1;
  friend constexpr bool operator==(const TileSpec&, const TileSpec&) = default;
  friend constexpr auto operator<=>(const TileSpec&, const TileSpec&) = default;
};

std::string to_string(const TileSpec& t);
/// "TXxTYxTZ".
TileSpec parse_tile(const std::string& text);

/// Halo a kernel reads on each side of a tile interior, per axis.
struct ReadHalo {
  Dims3 lo;
  Dims3 hi;
};

/// hdiff reads 2 points around in i and j, vadvc reads wcon at i+1, copy
/// reads nothing outside the tile.
ReadHalo required_read_halo(Kernel kernel);

struct WindowTile {
  Box3 interior;
  ReadHalo halo;  // required halo clipped to what exists in the grid

  Box3 read_region() const;
};

struct WindowPlan {
  Kernel kernel = Kernel::hdiff;
  Dims3 dims;
  Halo3 halo = kStencilHalo;
  TileSpec tile;
  unsigned workers = 1;
  std::vector<WindowTile> tiles;  // ordered by (k, j, i) of origin
};

/// Throws ConfigError when the tile exceeds the interior on some axis, is
/// zero on some axis, or (vadvc) does not span the full column.
void validate_tile(const Dims3& dims, const Halo3& halo, const TileSpec& tile, Kernel kernel);

/// Splits the interior of a `dims` grid into tiles; ragged edge tiles are
/// shrunk.
WindowPlan plan_windows(const Dims3& dims, const TileSpec& tile, Kernel kernel,
                        const Halo3& halo = kStencilHalo, unsigned workers = 1);

struct PlanReport {
  enum class Kind { ok, mismatch, containment, overlap, coverage, ordering };
  Kind kind = Kind::ok;
  std::optional<std::size_t> tile;   // first violating tile
  std::optional<Coord3> coordinate;  // offending point, when there is one
  std::string message;

  bool ok() const { return kind == Kind::ok; }
};

std::string to_string(PlanReport::Kind kind);

/// Checks partition, containment and ordering of `plan` against `dims`.
PlanReport validate_plan(const WindowPlan& plan, const Dims3& dims);

struct ExecOptions {
  std::optional<Isa> isa;  // default_isa() when unset
};

/// Worker count after the STENCILSMITH_THREADS cap; at least 1.
unsigned effective_workers(unsigned requested);

/// Tile-by-tile execution with a static block assignment of tiles to
/// workers. Output equals the reference kernel bitwise for every legal plan
/// and worker count. Tiles write only their interiors; the halo is copied
/// from the pass-through input and interior points not covered by the plan
/// stay zero.
Grid3D execute_tiled(const Grid3D& src, const HdiffParams& params, const WindowPlan& plan,
                     unsigned workers, const ExecOptions& options = {});
Grid3D execute_tiled(const FieldSet& fields, const WindowPlan& plan, unsigned workers,
                     const ExecOptions& options = {});
Grid3D execute_tiled_copy(const Grid3D& src, const WindowPlan& plan, unsigned workers,
                          const ExecOptions& options = {});

/// On-chip bytes for one tile: fields · (tx+2hi)(ty+2hj)(tz+2hk) · bytes_per_elem,
/// with h = (2,2,0) for hdiff and vadvc, 0 for copy, and 2, 10, 2 fields.
std::size_t tile_footprint(const TileSpec& tile, Kernel kernel, std::size_t bytes_per_elem);

}  // namespace stencilsmith
