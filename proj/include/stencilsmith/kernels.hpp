// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stencilsmith/grid.hpp"

namespace stencilsmith {

enum class Kernel { hdiff, vadvc, copy };

std::string to_string(Kernel k);
Kernel parse_kernel(const std::string& text);

struct HdiffParams {
  double c1 = 0.025;
};

/// Inputs of the vertical-advection u-stage. The ccol/dcol scratch lives
/// inside the kernel.
struct FieldSet {
  Grid3D wcon;
  Grid3D ustage;
  Grid3D upos;
  Grid3D utens;
  Grid3D utensstage;
  double dtr_stage = 3.0 / 20.0;
  double bet_m = 0.5;
  double bet_p = 0.5;

  /// bet_m = 0.5(1 - beta_v), bet_p = 0.5(1 + beta_v).
  void set_off_centering(double beta_v) {
    bet_m = 0.5 * (1.0 - beta_v);
    bet_p = 0.5 * (1.0 + beta_v);
  }
  const Grid3D& shape() const { return utensstage; }
};

/// Synthetic vadvc inputs: every field drawn from its own SplitMix64 stream
/// derived from `seed`. wcon is mapped to [-0.1, 0.1) so the column systems
/// stay diagonally dominant; the other fields are in [0, 1).
FieldSet make_vadvc_fields(const Dims3& dims, const Halo3& halo, Precision precision,
                           std::uint64_t seed);

/// Throws KernelError on shape/precision mismatch, nz < 3, halo.i < 1,
/// halo.k != 0, bet_m + bet_p != 1 or any non-finite input.
void validate_fields(const FieldSet& fields);

/// 4·c - w - e - s - n at (i, j, k). Throws IndexError without a full
/// 5-point neighbourhood.
double laplacian(const Grid3D& src, std::size_t i, std::size_t j, std::size_t k);

/// Naive single-sweep kernels. The interior is computed point by point (or
/// column by column for vadvc); halo points of the output are copied from
/// the pass-through input (src, or utensstage for vadvc).
Grid3D hdiff_reference(const Grid3D& src, const HdiffParams& params = {});
Grid3D vadvc_reference(const FieldSet& fields);
Grid3D copy_reference(const Grid3D& src);

/// Throws KernelError if `src` cannot be diffused (halo < 2 or non-finite).
void validate_hdiff_input(const Grid3D& src, const HdiffParams& params);

template <class T>
constexpr T pivot_threshold() {
  return sizeof(T) == 4 ? T(1e-20) : T(1e-30);
}

/// Thomas algorithm. lower[0] and upper[n-1] are ignored. Throws
/// SingularSystemError when an elimination pivot is under pivot_threshold.
template <class T>
std::vector<T> thomas_solve(std::span<const T> lower, std::span<const T> diag,
                            std::span<const T> upper, std::span<const T> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n)
    throw ConfigError("thomas_solve: diagonals and rhs must share a non-zero length");

  std::vector<T> c(n);
  std::vector<T> x(n);
  auto pivot = [](T p, std::size_t k) {
    if (!(std::abs(p) >= pivot_threshold<T>()))
      throw SingularSystemError("thomas_solve: pivot " + std::to_string(p) + " at row " +
                                std::to_string(k));
    return p;
  };
  T m = pivot(diag[0], 0);
  c[0] = n > 1 ? upper[0] / m : T(0);
  x[0] = rhs[0] / m;
  for (std::size_t k = 1; k < n; ++k) {
    m = pivot(diag[k] - lower[k] * c[k - 1], k);
    c[k] = k + 1 < n ? upper[k] / m : T(0);
    x[k] = (rhs[k] - lower[k] * x[k - 1]) / m;
  }
  for (std::size_t k = n - 1; k-- > 0;) x[k] -= c[k] * x[k + 1];
  return x;
}

/// Explicit tridiagonal system behind one vadvc column, assembled in f64
/// from the field values: lower = acol, diag = b, upper = ccol before
/// normalization, rhs = d. Solving it gives the column's `data` vector;
/// the kernel output is dtr_stage·(data - upos).
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;
};
TridiagonalSystem vadvc_column_system(const FieldSet& fields, std::size_t i, std::size_t j);

struct FlopCount {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;
  std::uint64_t divs = 0;
  std::uint64_t total = 0;

  FlopCount& operator+=(const FlopCount& o) {
    adds += o.adds;
    muls += o.muls;
    divs += o.divs;
    total += o.total;
    return *this;
  }
  friend bool operator==(const FlopCount&, const FlopCount&) = default;
};

/// Per interior point (34).
FlopCount hdiff_point_flops();
/// One column of `nz` levels through the forward and backward sweeps.
FlopCount vadvc_column_flops(std::size_t nz);
/// Exact operation counts of the reference kernels on a grid of `dims` with
/// the given halo.
FlopCount count_flops(Kernel kernel, const Dims3& dims, const Halo3& halo = kStencilHalo);

}  // namespace stencilsmith
