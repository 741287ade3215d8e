// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <tuple>

#include "stencilsmith/tiling.hpp"

namespace stencilsmith {

std::string to_string(const TileSpec& t) {
  return std::to_string(t.tx) + "x" + std::to_string(t.ty) + "x" + std::to_string(t.tz);
}

TileSpec parse_tile(const std::string& text) {
  Dims3 d;
  try {
    d = parse_dims(text);
  } catch (const ConfigError&) {
    throw ConfigError("expected TXxTYxTZ, got '" + text + "'");
  }
  return TileSpec{d.nx, d.ny, d.nz};
}

ReadHalo required_read_halo(Kernel kernel) {
  switch (kernel) {
    case Kernel::hdiff: return {{2, 2, 0}, {2, 2, 0}};
    case Kernel::vadvc: return {{0, 0, 0}, {1, 0, 0}};
    case Kernel::copy: return {};
  }
  return {};
}

Box3 WindowTile::read_region() const {
  return Box3{{interior.origin.i - halo.lo.nx, interior.origin.j - halo.lo.ny,
               interior.origin.k - halo.lo.nz},
              {interior.extent.nx + halo.lo.nx + halo.hi.nx,
               interior.extent.ny + halo.lo.ny + halo.hi.ny,
               interior.extent.nz + halo.lo.nz + halo.hi.nz}};
}

namespace {

Box3 domain_interior(const Dims3& dims, const Halo3& halo) {
  auto inner = [](std::size_t n, std::uint32_t h) -> std::size_t {
    return n > 2 * std::size_t{h} ? n - 2 * std::size_t{h} : 0;
  };
  return Box3{{halo.i, halo.j, halo.k},
              {inner(dims.nx, halo.i), inner(dims.ny, halo.j), inner(dims.nz, halo.k)}};
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

void validate_tile(const Dims3& dims, const Halo3& halo, const TileSpec& tile, Kernel kernel) {
  validate_dims(dims);
  const Box3 inner = domain_interior(dims, halo);
  if (inner.empty())
    throw ConfigError("dims " + to_string(dims) + " leave an empty interior");
  if (tile.tx == 0 || tile.ty == 0 || tile.tz == 0)
    throw ConfigError("tile " + to_string(tile) + " has a zero extent");
  if (tile.tx > inner.extent.nx || tile.ty > inner.extent.ny || tile.tz > inner.extent.nz)
    throw ConfigError("tile " + to_string(tile) + " exceeds the interior " +
                      to_string(inner.extent));
  if (kernel == Kernel::vadvc && tile.tz != dims.nz)
    throw ConfigError("vadvc tiles must span the column: tz must equal nz = " +
                      std::to_string(dims.nz));
}

WindowPlan plan_windows(const Dims3& dims, const TileSpec& tile, Kernel kernel,
                        const Halo3& halo, unsigned workers) {
  if (kernel == Kernel::vadvc && halo.k != 0)
    throw ConfigError("vadvc owns whole columns: halo.k must be 0");
  validate_tile(dims, halo, tile, kernel);

  WindowPlan plan;
  plan.kernel = kernel;
  plan.dims = dims;
  plan.halo = halo;
  plan.tile = tile;
  plan.workers = std::max(1u, workers);

  const Box3 inner = domain_interior(dims, halo);
  const ReadHalo need = required_read_halo(kernel);
  const std::size_t n_i = ceil_div(inner.extent.nx, tile.tx);
  const std::size_t n_j = ceil_div(inner.extent.ny, tile.ty);
  const std::size_t n_k = ceil_div(inner.extent.nz, tile.tz);
  plan.tiles.reserve(n_i * n_j * n_k);

  auto clip = [](std::size_t want, std::size_t room) { return std::min(want, room); };
  for (std::size_t bk = 0; bk < n_k; ++bk)
    for (std::size_t bj = 0; bj < n_j; ++bj)
      for (std::size_t bi = 0; bi < n_i; ++bi) {
        WindowTile t;
        t.interior.origin = {inner.origin.i + bi * tile.tx, inner.origin.j + bj * tile.ty,
                             inner.origin.k + bk * tile.tz};
        t.interior.extent = {
            std::min(tile.tx, inner.extent.nx - bi * tile.tx),
            std::min(tile.ty, inner.extent.ny - bj * tile.ty),
            std::min(tile.tz, inner.extent.nz - bk * tile.tz)};
        const Coord3& o = t.interior.origin;
        const Dims3& e = t.interior.extent;
        t.halo.lo = {clip(need.lo.nx, o.i), clip(need.lo.ny, o.j), clip(need.lo.nz, o.k)};
        t.halo.hi = {clip(need.hi.nx, dims.nx - o.i - e.nx),
                     clip(need.hi.ny, dims.ny - o.j - e.ny),
                     clip(need.hi.nz, dims.nz - o.k - e.nz)};
        plan.tiles.push_back(t);
      }
  return plan;
}

std::string to_string(PlanReport::Kind kind) {
  switch (kind) {
    case PlanReport::Kind::ok: return "ok";
    case PlanReport::Kind::mismatch: return "mismatch";
    case PlanReport::Kind::containment: return "containment";
    case PlanReport::Kind::overlap: return "overlap";
    case PlanReport::Kind::coverage: return "coverage";
    case PlanReport::Kind::ordering: return "ordering";
  }
  return "unknown";
}

PlanReport validate_plan(const WindowPlan& plan, const Dims3& dims) {
  PlanReport report;
  auto fail = [&](PlanReport::Kind kind, std::optional<std::size_t> tile,
                  std::optional<Coord3> at, std::string message) {
    report.kind = kind;
    report.tile = tile;
    report.coordinate = at;
    report.message = std::move(message);
    return report;
  };

  if (plan.dims != dims)
    return fail(PlanReport::Kind::mismatch, std::nullopt, std::nullopt,
                "plan built for dims " + to_string(plan.dims) + ", grid is " + to_string(dims));

  const Box3 inner = domain_interior(dims, plan.halo);
  const Box3 whole{{0, 0, 0}, dims};
  auto inside = [](const Box3& outer, const Box3& b) {
    return b.origin.i >= outer.origin.i && b.origin.j >= outer.origin.j &&
           b.origin.k >= outer.origin.k &&
           b.origin.i + b.extent.nx <= outer.origin.i + outer.extent.nx &&
           b.origin.j + b.extent.ny <= outer.origin.j + outer.extent.ny &&
           b.origin.k + b.extent.nz <= outer.origin.k + outer.extent.nz;
  };

  // Marks interior points relative to the interior origin.
  std::vector<std::uint8_t> seen(inner.extent.volume(), 0);
  auto seen_index = [&](std::size_t i, std::size_t j, std::size_t k) {
    return linear_index(i - inner.origin.i, j - inner.origin.j, k - inner.origin.k,
                        inner.extent);
  };

  for (std::size_t t = 0; t < plan.tiles.size(); ++t) {
    const WindowTile& tile = plan.tiles[t];
    const Box3& b = tile.interior;
    if (b.empty())
      return fail(PlanReport::Kind::containment, t, b.origin, "tile has an empty interior");
    if (!inside(inner, b))
      return fail(PlanReport::Kind::containment, t, b.origin,
                  "tile interior leaves the domain interior");
    if (!inside(whole, tile.read_region()))
      return fail(PlanReport::Kind::containment, t, b.origin,
                  "tile read region leaves the grid");
    if (t > 0) {
      const Coord3& p = plan.tiles[t - 1].interior.origin;
      if (std::tie(b.origin.k, b.origin.j, b.origin.i) <= std::tie(p.k, p.j, p.i))
        return fail(PlanReport::Kind::ordering, t, b.origin,
                    "tiles are not ordered by (k, j, i) of origin");
    }
    for (std::size_t k = b.origin.k; k < b.origin.k + b.extent.nz; ++k)
      for (std::size_t j = b.origin.j; j < b.origin.j + b.extent.ny; ++j)
        for (std::size_t i = b.origin.i; i < b.origin.i + b.extent.nx; ++i) {
          std::uint8_t& mark = seen[seen_index(i, j, k)];
          if (mark != 0)
            return fail(PlanReport::Kind::overlap, t, Coord3{i, j, k},
                        "interior point covered by more than one tile");
          mark = 1;
        }
  }

  for (std::size_t n = 0; n < seen.size(); ++n) {
    if (seen[n] != 0) continue;
    const Dims3& e = inner.extent;
    const Coord3 at{inner.origin.i + n % e.nx, inner.origin.j + (n / e.nx) % e.ny,
                    inner.origin.k + n / e.plane()};
    return fail(PlanReport::Kind::coverage, std::nullopt, at,
                "interior point not covered by any tile");
  }
  return report;
}

std::size_t tile_footprint(const TileSpec& tile, Kernel kernel, std::size_t bytes_per_elem) {
  std::size_t fields = 2;
  std::size_t hi = 0, hj = 0, hk = 0;
  switch (kernel) {
    case Kernel::hdiff:
      hi = hj = 2;
      break;
    case Kernel::vadvc:
      fields = 8 + 2;  // seven fields and the output, plus ccol/dcol scratch
      hi = hj = 2;
      break;
    case Kernel::copy:
      break;
  }
  return fields * (tile.tx + 2 * hi) * (tile.ty + 2 * hj) * (tile.tz + 2 * hk) *
         bytes_per_elem;
}

}  // namespace stencilsmith
