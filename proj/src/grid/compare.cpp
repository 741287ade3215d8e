// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cmath>

#include "stencilsmith/grid.hpp"

namespace stencilsmith {
namespace {

// Maps IEEE bits onto an unsigned line that is monotone in value.
template <class U>
U ordered_key(U bits) {
  constexpr U kSign = U{1} << (sizeof(U) * 8 - 1);
  return (bits & kSign) ? static_cast<U>(~bits) : static_cast<U>(bits | kSign);
}

template <class U>
U key_distance(U a, U b) {
  return a > b ? a - b : b - a;
}

}  // namespace

std::uint64_t ulp_distance(float a, float b) {
  return key_distance(ordered_key(std::bit_cast<std::uint32_t>(a)),
                      ordered_key(std::bit_cast<std::uint32_t>(b)));
}

std::uint64_t ulp_distance(double a, double b) {
  return key_distance(ordered_key(std::bit_cast<std::uint64_t>(a)),
                      ordered_key(std::bit_cast<std::uint64_t>(b)));
}

CompareResult compare(const Grid3D& a, const Grid3D& b, Region region) {
  if (a.dims() != b.dims())
    throw ConfigError("compare: dims " + to_string(a.dims()) + " vs " + to_string(b.dims()));
  if (a.precision() != b.precision())
    throw ConfigError("compare: precision mismatch");

  const Dims3& d = a.dims();
  const Box3 box = region == Region::all ? Box3{{0, 0, 0}, d} : a.interior();
  CompareResult result;

  a.visit([&](auto va) {
    using T = typename decltype(va)::value_type;
    auto vb = b.values<T>();
    for (std::size_t k = box.origin.k; k < box.origin.k + box.extent.nz; ++k)
      for (std::size_t j = box.origin.j; j < box.origin.j + box.extent.ny; ++j)
        for (std::size_t i = box.origin.i; i < box.origin.i + box.extent.nx; ++i) {
          const std::size_t n = linear_index(i, j, k, d);
          const T x = va[n];
          const T y = vb[n];
          const std::uint64_t ulp = ulp_distance(x, y);
          if (ulp == 0) continue;
          if (!result.first_mismatch) result.first_mismatch = Coord3{i, j, k};
          result.max_ulp_diff = std::max(result.max_ulp_diff, ulp);
          const double diff = std::abs(static_cast<double>(x) - static_cast<double>(y));
          if (!(diff <= result.max_abs_diff)) result.max_abs_diff = diff;
        }
  });
  return result;
}

}  // namespace stencilsmith
