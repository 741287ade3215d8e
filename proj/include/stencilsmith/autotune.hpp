// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "stencilsmith/perfmodel.hpp"
#include "stencilsmith/tiling.hpp"

namespace stencilsmith {

struct SearchSpace {
  Kernel kernel = Kernel::hdiff;
  Dims3 domain;
  Halo3 halo = kStencilHalo;
  std::vector<std::size_t> tx;
  std::vector<std::size_t> ty;
  std::vector<std::size_t> tz;
  std::size_t bytes_per_elem = 4;
  std::optional<std::size_t> footprint_budget;
  std::size_t n_pe = 1;  // PEs the modelled throughput is taken at
};

/// Powers of two up to each interior extent, plus the extent itself; vadvc
/// fixes tz = nz.
SearchSpace default_space(Kernel kernel, const Dims3& domain, std::size_t bytes_per_elem,
                          std::optional<std::size_t> budget = std::nullopt);

/// Every tile of the space that fits the budget, in (tx, ty, tz) order.
/// Throws NoFeasiblePointError when none does.
std::vector<TileSpec> feasible_tiles(const SearchSpace& space);

struct ParetoPoint {
  TileSpec tile;
  double throughput = 0.0;     // modelled GFLOP/s
  std::size_t footprint = 0;   // bytes
  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

/// Throughput of the device-resident, plan-derived workload on space.n_pe
/// PEs. Throws ConfigError for tiles outside the TileSpec bounds.
ParetoPoint evaluate_tile(const TileSpec& tile, const SearchSpace& space,
                          const MachineModel& model);

/// `a` has throughput >= and footprint <= `b`, one of them strictly.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);

/// Non-dominated points sorted by footprint, then tile.
std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

struct SearchMode {
  enum class Kind { exhaustive, random, hillclimb };
  Kind kind = Kind::exhaustive;
  std::size_t count = 0;  // samples (random) or starts (hillclimb)
  std::uint64_t seed = 0;

  static SearchMode exhaustive() { return {}; }
  static SearchMode random(std::size_t n, std::uint64_t seed) { return {Kind::random, n, seed}; }
  static SearchMode hillclimb(std::size_t starts, std::uint64_t seed) {
    return {Kind::hillclimb, starts, seed};
  }
};

struct SearchResult {
  std::vector<ParetoPoint> front;
  std::vector<ParetoPoint> evaluated;  // sorted by tile
  std::size_t evaluations = 0;
};

SearchResult search(const SearchSpace& space, const SearchMode& mode, const MachineModel& model);

/// Highest throughput within budget, smaller footprint on ties. Throws
/// NoFeasiblePointError when nothing fits.
ParetoPoint pick_operating_point(const std::vector<ParetoPoint>& front, std::size_t budget);

/// kernel,tx,ty,tz,bytes_per_elem,footprint_bytes,gflops_model,on_front
void write_tune_csv(std::ostream& out, const SearchSpace& space, const SearchResult& result);

}  // namespace stencilsmith
