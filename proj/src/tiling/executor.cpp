// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <thread>

#include "stencilsmith/tiling.hpp"

namespace stencilsmith {

unsigned effective_workers(unsigned requested) {
  unsigned workers = std::max(1u, requested);
  if (const char* env = std::getenv("STENCILSMITH_THREADS"); env != nullptr && *env != '\0') {
    unsigned cap = 0;
    const char* end = env + std::strlen(env);
    auto [p, ec] = std::from_chars(env, end, cap);
    if (ec != std::errc{} || p != end || cap == 0)
      throw ConfigError("STENCILSMITH_THREADS must be a positive integer, got '" +
                        std::string(env) + "'");
    workers = std::min(workers, cap);
  }
  return workers;
}

namespace {

void check_plan(const WindowPlan& plan, Kernel kernel, const Grid3D& grid) {
  if (plan.kernel != kernel)
    throw PlanError("plan was built for " + to_string(plan.kernel) + ", executing " +
                    to_string(kernel));
  if (plan.dims != grid.dims())
    throw PlanError("plan built for dims " + to_string(plan.dims) + ", grid is " +
                    to_string(grid.dims()));
  if (!(plan.halo == grid.halo())) throw PlanError("plan halo differs from the grid halo");
  const Box3 inner = grid.interior();
  for (std::size_t t = 0; t < plan.tiles.size(); ++t) {
    const Box3& b = plan.tiles[t].interior;
    const bool inside = b.origin.i >= inner.origin.i && b.origin.j >= inner.origin.j &&
                        b.origin.k >= inner.origin.k &&
                        b.origin.i + b.extent.nx <= inner.origin.i + inner.extent.nx &&
                        b.origin.j + b.extent.ny <= inner.origin.j + inner.extent.ny &&
                        b.origin.k + b.extent.nz <= inner.origin.k + inner.extent.nz;
    if (!inside)
      throw PlanError("tile " + std::to_string(t) + " at " + to_string(b.origin) +
                      " leaves the domain interior");
  }
}

/// Zero grid carrying the halo of `pass`.
Grid3D halo_only_copy(const Grid3D& pass) {
  Grid3D out(pass.dims(), pass.halo(), pass.precision());
  const Box3 inner = pass.interior();
  const Dims3& d = pass.dims();
  pass.visit([&](auto in) {
    using T = std::remove_const_t<typename decltype(in)::element_type>;
    std::span<T> o = out.values<T>();
    for (std::size_t k = 0; k < d.nz; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i)
          if (!inner.contains({i, j, k})) {
            const std::size_t n = linear_index(i, j, k, d);
            o[n] = in[n];
          }
  });
  return out;
}

/// Runs tiles [w·n/W, (w+1)·n/W) on worker w. The exception of the lowest
/// failing worker is rethrown; foreign exceptions become ExecutionError.
void run_blocks(std::size_t n_tiles, unsigned workers,
                const std::function<void(std::size_t)>& run_tile) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_tiles, 1)));
  std::vector<std::exception_ptr> errors(workers);
  auto block = [&](unsigned w) {
    const std::size_t first = n_tiles * w / workers;
    const std::size_t last = n_tiles * (w + 1) / workers;
    try {
      for (std::size_t t = first; t < last; ++t) run_tile(t);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    block(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    try {
      for (unsigned w = 1; w < workers; ++w) pool.emplace_back(block, w);
    } catch (const std::system_error& e) {
      for (std::thread& t : pool) t.join();
      throw ExecutionError(std::string("could not start worker threads: ") + e.what());
    }
    block(0);
    for (std::thread& t : pool) t.join();
  }

  for (const std::exception_ptr& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& ex) {
      throw ExecutionError(std::string("worker failed: ") + ex.what());
    } catch (...) {
      throw ExecutionError("worker failed with an unknown exception");
    }
  }
}

}  // namespace

Grid3D execute_tiled(const Grid3D& src, const HdiffParams& params, const WindowPlan& plan,
                     unsigned workers, const ExecOptions& options) {
  check_plan(plan, Kernel::hdiff, src);
  validate_hdiff_input(src, params);
  const Isa isa = options.isa.value_or(default_isa());
  Grid3D out = halo_only_copy(src);
  run_blocks(plan.tiles.size(), effective_workers(workers), [&](std::size_t t) {
    hdiff_region(src, out, plan.tiles[t].interior, params, isa);
  });
  return out;
}

Grid3D execute_tiled(const FieldSet& fields, const WindowPlan& plan, unsigned workers,
                     const ExecOptions& options) {
  validate_fields(fields);
  check_plan(plan, Kernel::vadvc, fields.shape());
  const Isa isa = options.isa.value_or(default_isa());
  Grid3D out = halo_only_copy(fields.utensstage);
  run_blocks(plan.tiles.size(), effective_workers(workers), [&](std::size_t t) {
    vadvc_region(fields, out, plan.tiles[t].interior, isa);
  });
  return out;
}

Grid3D execute_tiled_copy(const Grid3D& src, const WindowPlan& plan, unsigned workers,
                          const ExecOptions& options) {
  check_plan(plan, Kernel::copy, src);
  const Isa isa = options.isa.value_or(default_isa());
  Grid3D out = halo_only_copy(src);
  run_blocks(plan.tiles.size(), effective_workers(workers), [&](std::size_t t) {
    copy_region(src, out, plan.tiles[t].interior, isa);
  });
  return out;
}

}  // namespace stencilsmith
