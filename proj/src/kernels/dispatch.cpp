// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <memory>
#include <new>

#include "simd_rows.hpp"
#include "stencilsmith/detail/stencil_ops.hpp"
#include "stencilsmith/simd.hpp"

namespace stencilsmith {

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

Isa parse_isa(const std::string& text) {
  if (text == "scalar") return Isa::scalar;
  if (text == "avx2") return Isa::avx2;
  if (text == "neon") return Isa::neon;
  throw ConfigError("unknown ISA '" + text + "'");
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(STENCILSMITH_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(STENCILSMITH_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (isa_available(isa)) out.push_back(isa);
  return out;
}

Isa default_isa() {
  if (const char* env = std::getenv("STENCILSMITH_ISA"); env != nullptr && *env != '\0') {
    const Isa wanted = parse_isa(env);
    if (!isa_available(wanted))
      throw ConfigError("STENCILSMITH_ISA=" + std::string(env) + " is not available here");
    return wanted;
  }
  return available_isas().back();
}

namespace {

void check_box(const Grid3D& grid, const Box3& box, const char* kernel) {
  const Box3 inner = grid.interior();
  const bool inside = box.origin.i >= inner.origin.i && box.origin.j >= inner.origin.j &&
                      box.origin.k >= inner.origin.k &&
                      box.origin.i + box.extent.nx <= inner.origin.i + inner.extent.nx &&
                      box.origin.j + box.extent.ny <= inner.origin.j + inner.extent.ny &&
                      box.origin.k + box.extent.nz <= inner.origin.k + inner.extent.nz;
  if (!inside)
    throw KernelError(std::string(kernel) + ": region at " + to_string(box.origin) +
                      " extent " + to_string(box.extent) + " leaves the interior");
}

void check_output(const Grid3D& src, const Grid3D& dst) {
  if (dst.dims() != src.dims() || dst.precision() != src.precision())
    throw KernelError("output grid does not match the input shape");
}

template <class T>
std::size_t hdiff_row_vector(Isa isa, const simd_rows::HdiffRow<T>& row) {
  switch (isa) {
#if defined(STENCILSMITH_HAVE_AVX2)
    case Isa::avx2: return simd_rows::hdiff_row_avx2(row);
#endif
#if defined(STENCILSMITH_HAVE_NEON)
    case Isa::neon: return simd_rows::hdiff_row_neon(row);
#endif
    default: return 0;
  }
}

template <class T>
std::size_t copy_row_vector(Isa isa, const simd_rows::CopyRow<T>& row) {
  switch (isa) {
#if defined(STENCILSMITH_HAVE_AVX2)
    case Isa::avx2: return simd_rows::copy_row_avx2(row);
#endif
#if defined(STENCILSMITH_HAVE_NEON)
    case Isa::neon: return simd_rows::copy_row_neon(row);
#endif
    default: return 0;
  }
}

template <class T>
simd_rows::VadvcStatus vadvc_vector(Isa isa, const simd_rows::VadvcColumns<T>& cols) {
  switch (isa) {
#if defined(STENCILSMITH_HAVE_AVX2)
    case Isa::avx2: return simd_rows::vadvc_columns_avx2(cols);
#endif
#if defined(STENCILSMITH_HAVE_NEON)
    case Isa::neon: return simd_rows::vadvc_columns_neon(cols);
#endif
    default: return {0, -1, 0};
  }
}

template <class T>
void hdiff_region_typed(const Grid3D& src, Grid3D& dst, const Box3& box, T c1, Isa isa) {
  const Dims3& d = src.dims();
  const T* in = src.values<T>().data();
  T* out = dst.values<T>().data();
  const auto stride_j = static_cast<std::ptrdiff_t>(d.nx);

  for (std::size_t k = box.origin.k; k < box.origin.k + box.extent.nz; ++k)
    for (std::size_t j = box.origin.j; j < box.origin.j + box.extent.ny; ++j) {
      const std::size_t row = linear_index(box.origin.i, j, k, d);
      const std::size_t done = hdiff_row_vector<T>(
          isa, {in + row, out + row, stride_j, box.extent.nx, c1});
      for (std::size_t x = done; x < box.extent.nx; ++x) {
        const T* s = in + row + x;
        auto at = [&](int di, int dj) { return s[di + dj * stride_j]; };
        out[row + x] = detail::hdiff_point<T>(at, c1);
      }
    }
}

template <class T>
void copy_region_typed(const Grid3D& src, Grid3D& dst, const Box3& box, Isa isa) {
  const Dims3& d = src.dims();
  const T* in = src.values<T>().data();
  T* out = dst.values<T>().data();
  for (std::size_t k = box.origin.k; k < box.origin.k + box.extent.nz; ++k)
    for (std::size_t j = box.origin.j; j < box.origin.j + box.extent.ny; ++j) {
      const std::size_t row = linear_index(box.origin.i, j, k, d);
      const std::size_t done = copy_row_vector<T>(isa, {in + row, out + row, box.extent.nx});
      for (std::size_t x = done; x < box.extent.nx; ++x) out[row + x] = in[row + x];
    }
}

struct AlignedFree {
  void operator()(void* p) const { ::operator delete(p, std::align_val_t{64}); }
};

[[noreturn]] void throw_singular(std::size_t i, std::size_t j, std::size_t k) {
  throw SingularSystemError("vadvc: pivot under threshold in column (" + std::to_string(i) +
                            "," + std::to_string(j) + ") at level " + std::to_string(k));
}

template <class T>
void vadvc_region_typed(const FieldSet& f, Grid3D& dst, const Box3& box, Isa isa) {
  using detail::ColumnField;
  const Dims3& d = f.shape().dims();
  const std::size_t nz = d.nz;
  const auto stride_k = static_cast<std::ptrdiff_t>(d.plane());
  const T dtr = static_cast<T>(f.dtr_stage);
  const T bet_m = static_cast<T>(f.bet_m);
  const T bet_p = static_cast<T>(f.bet_p);

  const T* wcon = f.wcon.values<T>().data();
  const T* ustage = f.ustage.values<T>().data();
  const T* upos = f.upos.values<T>().data();
  const T* utens = f.utens.values<T>().data();
  const T* utensstage = f.utensstage.values<T>().data();
  T* out = dst.values<T>().data();

  // 2·nz levels of the widest vector (64 bytes per level covers 8 floats).
  std::unique_ptr<void, AlignedFree> scratch(
      ::operator new(2 * nz * 64, std::align_val_t{64}));
  std::vector<T> ccol(nz);
  std::vector<T> dcol(nz);

  for (std::size_t j = box.origin.j; j < box.origin.j + box.extent.ny; ++j) {
    const std::size_t base = linear_index(box.origin.i, j, 0, d);
    const simd_rows::VadvcColumns<T> cols{wcon + base,  ustage + base, upos + base,
                                          utens + base, utensstage + base, out + base,
                                          stride_k,     nz,            box.extent.nx,
                                          dtr,          bet_m,         bet_p,
                                          static_cast<T*>(scratch.get())};
    const simd_rows::VadvcStatus status = vadvc_vector<T>(isa, cols);
    if (status.failed_column >= 0)
      throw_singular(box.origin.i + static_cast<std::size_t>(status.failed_column), j,
                     status.failed_level);

    for (std::size_t x = status.processed; x < box.extent.nx; ++x) {
      const std::size_t col = base + x;
      auto in = [&](ColumnField field, std::size_t k) {
        const std::size_t n = col + k * d.plane();
        switch (field) {
          case ColumnField::wcon: return wcon[n];
          case ColumnField::wcon_east: return wcon[n + 1];
          case ColumnField::ustage: return ustage[n];
          case ColumnField::upos: return upos[n];
          case ColumnField::utens: return utens[n];
          case ColumnField::utensstage: break;
        }
        return utensstage[n];
      };
      auto store = [&](std::size_t k, T v) { out[col + k * d.plane()] = v; };
      auto pivot = [&](T p, std::size_t k) {
        if (!(std::abs(p) >= pivot_threshold<T>())) throw_singular(box.origin.i + x, j, k);
      };
      detail::vadvc_column<T>(nz, in, store, dtr, bet_m, bet_p, ccol.data(), dcol.data(),
                              pivot);
    }
  }
}

void require_available(Isa isa) {
  if (!isa_available(isa)) throw ConfigError("ISA " + to_string(isa) + " is not available");
}

}  // namespace

void hdiff_region(const Grid3D& src, Grid3D& dst, const Box3& box, const HdiffParams& params,
                  Isa isa) {
  require_available(isa);
  check_output(src, dst);
  if (src.halo().i < 2 || src.halo().j < 2)
    throw KernelError("hdiff needs a horizontal halo of at least 2");
  check_box(src, box, "hdiff");
  if (src.precision() == Precision::f32)
    hdiff_region_typed<float>(src, dst, box, static_cast<float>(params.c1), isa);
  else
    hdiff_region_typed<double>(src, dst, box, params.c1, isa);
}

void copy_region(const Grid3D& src, Grid3D& dst, const Box3& box, Isa isa) {
  require_available(isa);
  check_output(src, dst);
  check_box(src, box, "copy");
  if (src.precision() == Precision::f32)
    copy_region_typed<float>(src, dst, box, isa);
  else
    copy_region_typed<double>(src, dst, box, isa);
}

void vadvc_region(const FieldSet& fields, Grid3D& dst, const Box3& box, Isa isa) {
  require_available(isa);
  const Grid3D& shape = fields.shape();
  check_output(shape, dst);
  check_box(shape, box, "vadvc");
  if (box.origin.k != 0 || box.extent.nz != shape.dims().nz)
    throw KernelError("vadvc regions must span whole columns");
  if (shape.dims().nz < 3) throw KernelError("vadvc needs nz >= 3");
  if (shape.halo().i < 1) throw KernelError("vadvc needs halo.i >= 1 for wcon(i+1)");
  if (shape.precision() == Precision::f32)
    vadvc_region_typed<float>(fields, dst, box, isa);
  else
    vadvc_region_typed<double>(fields, dst, box, isa);
}

}  // namespace stencilsmith
