// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

// AArch64 only. Separate vmul/vadd (never vfma) to match the scalar rounding.

#include <arm_neon.h>

#include "simd_rows.hpp"
#include "stencilsmith/detail/stencil_ops.hpp"

namespace stencilsmith::simd_rows {
namespace {

struct Vf {
  using Scalar = float;
  static constexpr std::size_t kWidth = 4;
  float32x4_t v;

  Vf() = default;
  Vf(float32x4_t x) : v(x) {}
  explicit Vf(float s) : v(vdupq_n_f32(s)) {}

  static Vf load(const float* p) { return vld1q_f32(p); }
  void store(float* p) const { vst1q_f32(p, v); }
  int small_lanes(float tiny) const {
    // vcgeq is false for NaN, matching !(|x| >= tiny).
    const uint32x4_t ok = vcgeq_f32(vabsq_f32(v), vdupq_n_f32(tiny));
    int mask = 0;
    if (vgetq_lane_u32(ok, 0) == 0) mask |= 1;
    if (vgetq_lane_u32(ok, 1) == 0) mask |= 2;
    if (vgetq_lane_u32(ok, 2) == 0) mask |= 4;
    if (vgetq_lane_u32(ok, 3) == 0) mask |= 8;
    return mask;
  }

  friend Vf operator+(Vf a, Vf b) { return vaddq_f32(a.v, b.v); }
  friend Vf operator-(Vf a, Vf b) { return vsubq_f32(a.v, b.v); }
  friend Vf operator*(Vf a, Vf b) { return vmulq_f32(a.v, b.v); }
  friend Vf operator/(Vf a, Vf b) { return vdivq_f32(a.v, b.v); }
  friend Vf operator-(Vf a) { return vnegq_f32(a.v); }
};

struct Vd {
  using Scalar = double;
  static constexpr std::size_t kWidth = 2;
  float64x2_t v;

  Vd() = default;
  Vd(float64x2_t x) : v(x) {}
  explicit Vd(double s) : v(vdupq_n_f64(s)) {}

  static Vd load(const double* p) { return vld1q_f64(p); }
  void store(double* p) const { vst1q_f64(p, v); }
  int small_lanes(double tiny) const {
    const uint64x2_t ok = vcgeq_f64(vabsq_f64(v), vdupq_n_f64(tiny));
    int mask = 0;
    if (vgetq_lane_u64(ok, 0) == 0) mask |= 1;
    if (vgetq_lane_u64(ok, 1) == 0) mask |= 2;
    return mask;
  }

  friend Vd operator+(Vd a, Vd b) { return vaddq_f64(a.v, b.v); }
  friend Vd operator-(Vd a, Vd b) { return vsubq_f64(a.v, b.v); }
  friend Vd operator*(Vd a, Vd b) { return vmulq_f64(a.v, b.v); }
  friend Vd operator/(Vd a, Vd b) { return vdivq_f64(a.v, b.v); }
  friend Vd operator-(Vd a) { return vnegq_f64(a.v); }
};

template <class V, class T = typename V::Scalar>
std::size_t hdiff_row(const HdiffRow<T>& row) {
  const std::size_t n = row.count / V::kWidth * V::kWidth;
  const V c1(row.c1);
  for (std::size_t x = 0; x < n; x += V::kWidth) {
    const T* s = row.src + x;
    auto at = [&](int di, int dj) { return V::load(s + di + dj * row.stride_j); };
    detail::hdiff_point<V>(at, c1).store(row.dst + x);
  }
  return n;
}

template <class V, class T = typename V::Scalar>
std::size_t copy_row(const CopyRow<T>& row) {
  const std::size_t n = row.count / V::kWidth * V::kWidth;
  for (std::size_t x = 0; x < n; x += V::kWidth) V::load(row.src + x).store(row.dst + x);
  return n;
}

template <class V, class T = typename V::Scalar>
VadvcStatus vadvc_columns(const VadvcColumns<T>& cols) {
  using detail::ColumnField;
  constexpr T kTiny = sizeof(T) == 4 ? T(1e-20) : T(1e-30);
  const std::size_t n = cols.count / V::kWidth * V::kWidth;
  VadvcStatus status{n, -1, 0};

  V* ccol = reinterpret_cast<V*>(cols.scratch);
  V* dcol = ccol + cols.nz;
  const V dtr(cols.dtr);
  const V bet_m(cols.bet_m);
  const V bet_p(cols.bet_p);

  for (std::size_t x = 0; x < n; x += V::kWidth) {
    auto in = [&](ColumnField f, std::size_t k) {
      const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(x) +
                                 static_cast<std::ptrdiff_t>(k) * cols.stride_k;
      switch (f) {
        case ColumnField::wcon: return V::load(cols.wcon + off);
        case ColumnField::wcon_east: return V::load(cols.wcon + off + 1);
        case ColumnField::ustage: return V::load(cols.ustage + off);
        case ColumnField::upos: return V::load(cols.upos + off);
        case ColumnField::utens: return V::load(cols.utens + off);
        case ColumnField::utensstage: break;
      }
      return V::load(cols.utensstage + off);
    };
    auto out = [&](std::size_t k, V value) {
      value.store(cols.out + static_cast<std::ptrdiff_t>(x) +
                  static_cast<std::ptrdiff_t>(k) * cols.stride_k);
    };
    auto pivot = [&](V p, std::size_t k) {
      const int mask = p.small_lanes(kTiny);
      if (mask != 0 && status.failed_column < 0) {
        status.failed_column = static_cast<std::ptrdiff_t>(x) + __builtin_ctz(mask);
        status.failed_level = k;
      }
    };
    detail::vadvc_column<V>(cols.nz, in, out, dtr, bet_m, bet_p, ccol, dcol, pivot);
    if (status.failed_column >= 0) break;
  }
  return status;
}

}  // namespace

std::size_t hdiff_row_neon(const HdiffRow<float>& row) { return hdiff_row<Vf>(row); }
std::size_t hdiff_row_neon(const HdiffRow<double>& row) { return hdiff_row<Vd>(row); }
std::size_t copy_row_neon(const CopyRow<float>& row) { return copy_row<Vf>(row); }
std::size_t copy_row_neon(const CopyRow<double>& row) { return copy_row<Vd>(row); }
VadvcStatus vadvc_columns_neon(const VadvcColumns<float>& cols) { return vadvc_columns<Vf>(cols); }
VadvcStatus vadvc_columns_neon(const VadvcColumns<double>& cols) {
  return vadvc_columns<Vd>(cols);
}

}  // namespace stencilsmith::simd_rows
