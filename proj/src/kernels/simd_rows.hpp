// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

// Plain-pointer entry points of the vector kernels. Keep this header free
// of inline library code: its implementations build with ISA flags.

#pragma once

#include <cstddef>

namespace stencilsmith::simd_rows {

/// One row segment: `src`/`dst` point at the first output point, `stride_j`
/// is the distance between rows. Each call handles the largest multiple of
/// the vector width not exceeding `count` and returns how many points it
/// wrote; the caller finishes the tail with scalar code.
template <class T>
struct HdiffRow {
  const T* src;
  T* dst;
  std::ptrdiff_t stride_j;
  std::size_t count;
  T c1;
};

template <class T>
struct CopyRow {
  const T* src;
  T* dst;
  std::size_t count;
};

/// `count` adjacent columns starting at the given pointers (level 0); levels
/// are `stride_k` apart. Scratch holds 2·nz·width values.
template <class T>
struct VadvcColumns {
  const T* wcon;
  const T* ustage;
  const T* upos;
  const T* utens;
  const T* utensstage;
  T* out;
  std::ptrdiff_t stride_k;
  std::size_t nz;
  std::size_t count;
  T dtr;
  T bet_m;
  T bet_p;
  T* scratch;
};

/// Result of a vadvc call. `failed_column` is the column offset of the
/// first lane whose pivot fell under the threshold, or -1.
struct VadvcStatus {
  std::size_t processed;
  std::ptrdiff_t failed_column;
  std::size_t failed_level;
};

#if defined(STENCILSMITH_HAVE_AVX2)
std::size_t hdiff_row_avx2(const HdiffRow<float>& row);
std::size_t hdiff_row_avx2(const HdiffRow<double>& row);
std::size_t copy_row_avx2(const CopyRow<float>& row);
std::size_t copy_row_avx2(const CopyRow<double>& row);
VadvcStatus vadvc_columns_avx2(const VadvcColumns<float>& cols);
VadvcStatus vadvc_columns_avx2(const VadvcColumns<double>& cols);
#endif

#if defined(STENCILSMITH_HAVE_NEON)
std::size_t hdiff_row_neon(const HdiffRow<float>& row);
std::size_t hdiff_row_neon(const HdiffRow<double>& row);
std::size_t copy_row_neon(const CopyRow<float>& row);
std::size_t copy_row_neon(const CopyRow<double>& row);
VadvcStatus vadvc_columns_neon(const VadvcColumns<float>& cols);
VadvcStatus vadvc_columns_neon(const VadvcColumns<double>& cols);
#endif

}  // namespace stencilsmith::simd_rows
