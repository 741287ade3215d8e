// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include "stencilsmith/kernels.hpp"

namespace stencilsmith {
namespace {

constexpr FlopCount make(std::uint64_t adds, std::uint64_t muls, std::uint64_t divs) {
  return {adds, muls, divs, adds + muls + divs};
}

FlopCount scaled(FlopCount f, std::uint64_t n) {
  return make(f.adds * n, f.muls * n, f.divs * n);
}

}  // namespace

// 5 laplacians (1 mul, 4 sub), 4 flux differences, output (3 add/sub, 1 mul, 1 sub).
FlopCount hdiff_point_flops() { return make(5 * 4 + 4 + 4, 5 * 1 + 1, 0); }

// Tally of detail::vadvc_column:
//   top level       6 add,  5 mul, 2 div
//   inner level    12 add, 13 mul, 1 div
//   bottom level    8 add,  8 mul, 1 div
//   back-substitution 1 add + 1 mul per level above the bottom,
//   output          1 add + 1 mul per level.
FlopCount vadvc_column_flops(std::size_t nz) {
  if (nz < 3) throw ConfigError("vadvc columns need nz >= 3");
  const std::uint64_t inner = nz - 2;
  return make(6 + 12 * inner + 8 + (nz - 1) + nz, 5 + 13 * inner + 8 + (nz - 1) + nz,
              2 + inner + 1);
}

FlopCount count_flops(Kernel kernel, const Dims3& dims, const Halo3& halo) {
  validate_dims(dims);
  auto inner = [](std::size_t n, std::uint32_t h) -> std::uint64_t {
    return n > 2 * std::size_t{h} ? n - 2 * std::size_t{h} : 0;
  };
  const std::uint64_t ni = inner(dims.nx, halo.i);
  const std::uint64_t nj = inner(dims.ny, halo.j);
  switch (kernel) {
    case Kernel::hdiff:
      return scaled(hdiff_point_flops(), ni * nj * inner(dims.nz, halo.k));
    case Kernel::vadvc:
      if (halo.k != 0) throw ConfigError("vadvc owns whole columns: halo.k must be 0");
      return scaled(vadvc_column_flops(dims.nz), ni * nj);
    case Kernel::copy:
      return {};
  }
  return {};
}

}  // namespace stencilsmith
