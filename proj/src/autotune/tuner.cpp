// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

#include "stencilsmith/autotune.hpp"
#include "stencilsmith/csv.hpp"
#include "stencilsmith/rng.hpp"

namespace stencilsmith {

namespace {

std::vector<std::size_t> powers_up_to(std::size_t extent) {
  std::vector<std::size_t> out;
  for (std::size_t p = 1; p <= extent; p *= 2) out.push_back(p);
  if (out.empty() || out.back() != extent) out.push_back(extent);
  return out;
}

std::size_t interior_extent(std::size_t n, std::uint32_t h) {
  return n > 2 * std::size_t{h} ? n - 2 * std::size_t{h} : 0;
}

bool tile_less(const TileSpec& a, const TileSpec& b) {
  return std::tie(a.tx, a.ty, a.tz) < std::tie(b.tx, b.ty, b.tz);
}

/// Better for the single-objective climb: more throughput, then less
/// footprint, then smaller tile.
bool better(const ParetoPoint& a, const ParetoPoint& b) {
  if (a.throughput != b.throughput) return a.throughput > b.throughput;
  if (a.footprint != b.footprint) return a.footprint < b.footprint;
  return tile_less(a.tile, b.tile);
}

bool fits(const SearchSpace& s, const TileSpec& t) {
  return !s.footprint_budget || tile_footprint(t, s.kernel, s.bytes_per_elem) <= *s.footprint_budget;
}

}  // namespace

SearchSpace default_space(Kernel kernel, const Dims3& domain, std::size_t bytes_per_elem,
                          std::optional<std::size_t> budget) {
  SearchSpace s;
  s.kernel = kernel;
  s.domain = domain;
  s.bytes_per_elem = bytes_per_elem;
  s.footprint_budget = budget;
  s.tx = powers_up_to(interior_extent(domain.nx, s.halo.i));
  s.ty = powers_up_to(interior_extent(domain.ny, s.halo.j));
  s.tz = kernel == Kernel::vadvc ? std::vector<std::size_t>{domain.nz}
                                 : powers_up_to(interior_extent(domain.nz, s.halo.k));
  return s;
}

std::vector<TileSpec> feasible_tiles(const SearchSpace& space) {
  std::vector<TileSpec> out;
  for (std::size_t x : space.tx)
    for (std::size_t y : space.ty)
      for (std::size_t z : space.tz) {
        const TileSpec t{x, y, z};
        validate_tile(space.domain, space.halo, t, space.kernel);
        if (fits(space, t)) out.push_back(t);
      }
  std::sort(out.begin(), out.end(), tile_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw NoFeasiblePointError("no tile of the search space fits the budget");
  return out;
}

ParetoPoint evaluate_tile(const TileSpec& tile, const SearchSpace& space,
                          const MachineModel& model) {
  const WindowPlan plan = plan_windows(space.domain, tile, space.kernel, space.halo);
  const Workload w = make_workload(plan, space.bytes_per_elem, true);
  return {tile, simulate_run(w, space.n_pe, model).gflops,
          tile_footprint(tile, space.kernel, space.bytes_per_elem)};
}

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.throughput >= b.throughput && a.footprint <= b.footprint &&
         (a.throughput > b.throughput || a.footprint < b.footprint);
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points) {
  std::vector<ParetoPoint> front;
  for (const ParetoPoint& p : points) {
    const bool dominated = std::any_of(points.begin(), points.end(),
                                       [&](const ParetoPoint& q) { return dominates(q, p); });
    if (!dominated) front.push_back(p);
  }
  std::sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.footprint != b.footprint) return a.footprint < b.footprint;
    return tile_less(a.tile, b.tile);
  });
  front.erase(std::unique(front.begin(), front.end()), front.end());
  return front;
}

SearchResult search(const SearchSpace& space, const SearchMode& mode, const MachineModel& model) {
  const std::vector<TileSpec> tiles = feasible_tiles(space);
  std::map<TileSpec, ParetoPoint> seen;
  auto eval = [&](const TileSpec& t) -> const ParetoPoint& {
    auto it = seen.find(t);
    if (it == seen.end()) it = seen.emplace(t, evaluate_tile(t, space, model)).first;
    return it->second;
  };

  SplitMix64 rng(mode.seed);
  switch (mode.kind) {
    case SearchMode::Kind::exhaustive:
      for (const TileSpec& t : tiles) eval(t);
      break;

    case SearchMode::Kind::random: {
      // Partial Fisher-Yates: the first n entries become the sample.
      std::vector<std::size_t> order(tiles.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      const std::size_t n = std::min(mode.count, order.size());
      for (std::size_t i = 0; i < n; ++i) {
        std::swap(order[i], order[i + rng.next_below(order.size() - i)]);
        eval(tiles[order[i]]);
      }
      break;
    }

    case SearchMode::Kind::hillclimb: {
      auto pos = [&](const std::vector<std::size_t>& axis, std::size_t v) {
        return static_cast<std::size_t>(std::find(axis.begin(), axis.end(), v) - axis.begin());
      };
      auto feasible = [&](const TileSpec& t) {
        return std::binary_search(tiles.begin(), tiles.end(), t, tile_less);
      };
      for (std::size_t s = 0; s < mode.count; ++s) {
        TileSpec cur = tiles[rng.next_below(tiles.size())];
        ParetoPoint best = eval(cur);
        for (bool moved = true; moved;) {
          moved = false;
          const std::size_t ix = pos(space.tx, cur.tx);
          const std::size_t iy = pos(space.ty, cur.ty);
          const std::size_t iz = pos(space.tz, cur.tz);
          const TileSpec here = cur;
          auto step = [&](const std::vector<std::size_t>& axis, std::size_t i, int d,
                          std::size_t TileSpec::*field) {
            const auto j = static_cast<std::ptrdiff_t>(i) + d;
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(axis.size())) return;
            TileSpec t = here;
            t.*field = axis[static_cast<std::size_t>(j)];
            if (!feasible(t)) return;
            const ParetoPoint& p = eval(t);
            if (better(p, best)) {
              best = p;
              cur = t;
              moved = true;
            }
          };
          for (int d : {-1, 1}) {
            step(space.tx, ix, d, &TileSpec::tx);
            step(space.ty, iy, d, &TileSpec::ty);
            step(space.tz, iz, d, &TileSpec::tz);
          }
        }
      }
      break;
    }
  }

  SearchResult r;
  for (const auto& [tile, point] : seen) r.evaluated.push_back(point);
  r.evaluations = r.evaluated.size();
  r.front = pareto_front(r.evaluated);
  return r;
}

ParetoPoint pick_operating_point(const std::vector<ParetoPoint>& front, std::size_t budget) {
  const ParetoPoint* pick = nullptr;
  for (const ParetoPoint& p : front) {
    if (p.footprint > budget) continue;
    if (pick == nullptr || p.throughput > pick->throughput ||
        (p.throughput == pick->throughput && p.footprint < pick->footprint))
      pick = &p;
  }
  if (pick == nullptr)
    throw NoFeasiblePointError("no front point fits a budget of " + std::to_string(budget) +
                               " bytes");
  return *pick;
}

void write_tune_csv(std::ostream& out, const SearchSpace& space, const SearchResult& result) {
  out << "kernel,tx,ty,tz,bytes_per_elem,footprint_bytes,gflops_model,on_front\n";
  for (const ParetoPoint& p : result.evaluated) {
    const bool on_front =
        std::find(result.front.begin(), result.front.end(), p) != result.front.end();
    csv::Row row;
    row << to_string(space.kernel) << std::uint64_t{p.tile.tx} << std::uint64_t{p.tile.ty}
        << std::uint64_t{p.tile.tz} << std::uint64_t{space.bytes_per_elem}
        << std::uint64_t{p.footprint} << p.throughput << (on_front ? "1" : "0");
    row.write(out);
  }
}

}  // namespace stencilsmith
