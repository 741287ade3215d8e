// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx2 (no FMA). Only called after a runtime CPU check.

#include <immintrin.h>

#include "simd_rows.hpp"
#include "stencilsmith/detail/stencil_ops.hpp"

namespace stencilsmith::simd_rows {
namespace {

struct Vf {
  using Scalar = float;
  static constexpr std::size_t kWidth = 8;
  __m256 v;

  Vf() = default;
  Vf(__m256 x) : v(x) {}
  explicit Vf(float s) : v(_mm256_set1_ps(s)) {}

  static Vf load(const float* p) { return _mm256_loadu_ps(p); }
  void store(float* p) const { _mm256_storeu_ps(p, v); }
  // Lanes where !(|x| >= tiny), NaN included.
  int small_lanes(float tiny) const {
    const __m256 mag = _mm256_andnot_ps(_mm256_set1_ps(-0.0f), v);
    return _mm256_movemask_ps(_mm256_cmp_ps(mag, _mm256_set1_ps(tiny), _CMP_NGE_UQ));
  }

  friend Vf operator+(Vf a, Vf b) { return _mm256_add_ps(a.v, b.v); }
  friend Vf operator-(Vf a, Vf b) { return _mm256_sub_ps(a.v, b.v); }
  friend Vf operator*(Vf a, Vf b) { return _mm256_mul_ps(a.v, b.v); }
  friend Vf operator/(Vf a, Vf b) { return _mm256_div_ps(a.v, b.v); }
  friend Vf operator-(Vf a) { return _mm256_xor_ps(a.v, _mm256_set1_ps(-0.0f)); }
};

struct Vd {
  using Scalar = double;
  static constexpr std::size_t kWidth = 4;
  __m256d v;

  Vd() = default;
  Vd(__m256d x) : v(x) {}
  explicit Vd(double s) : v(_mm256_set1_pd(s)) {}

  static Vd load(const double* p) { return _mm256_loadu_pd(p); }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  int small_lanes(double tiny) const {
    const __m256d mag = _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
    return _mm256_movemask_pd(_mm256_cmp_pd(mag, _mm256_set1_pd(tiny), _CMP_NGE_UQ));
  }

  friend Vd operator+(Vd a, Vd b) { return _mm256_add_pd(a.v, b.v); }
  friend Vd operator-(Vd a, Vd b) { return _mm256_sub_pd(a.v, b.v); }
  friend Vd operator*(Vd a, Vd b) { return _mm256_mul_pd(a.v, b.v); }
  friend Vd operator/(Vd a, Vd b) { return _mm256_div_pd(a.v, b.v); }
  friend Vd operator-(Vd a) { return _mm256_xor_pd(a.v, _mm256_set1_pd(-0.0)); }
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

  // Caller guarantees 64-byte alignment and 2·nz·width scalars.
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

std::size_t hdiff_row_avx2(const HdiffRow<float>& row) { return hdiff_row<Vf>(row); }
std::size_t hdiff_row_avx2(const HdiffRow<double>& row) { return hdiff_row<Vd>(row); }
std::size_t copy_row_avx2(const CopyRow<float>& row) { return copy_row<Vf>(row); }
std::size_t copy_row_avx2(const CopyRow<double>& row) { return copy_row<Vd>(row); }
VadvcStatus vadvc_columns_avx2(const VadvcColumns<float>& cols) { return vadvc_columns<Vf>(cols); }
VadvcStatus vadvc_columns_avx2(const VadvcColumns<double>& cols) {
  return vadvc_columns<Vd>(cols);
}

}  // namespace stencilsmith::simd_rows
