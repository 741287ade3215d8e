// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

// Point and column formulas shared by the scalar kernels. Written against a
// generic scalar type so tests can instantiate them with an op-counting type;
// the SIMD variants replay exactly the same operation sequence lane-wise.

#pragma once

#include <cstddef>

namespace stencilsmith::detail {

/// `at(di, dj)` yields the source value at (i + di, j + dj) on the current level.
template <class T, class At>
T laplacian(const At& at, int di, int dj) {
  return T(4) * at(di, dj) - at(di - 1, dj) - at(di + 1, dj) - at(di, dj - 1) -
         at(di, dj + 1);
}

template <class T, class At>
T hdiff_point(const At& at, T c1) {
  const T lap = laplacian<T>(at, 0, 0);
  const T lap_ip = laplacian<T>(at, 1, 0);
  const T lap_im = laplacian<T>(at, -1, 0);
  const T lap_jp = laplacian<T>(at, 0, 1);
  const T lap_jm = laplacian<T>(at, 0, -1);

  const T flx = lap_ip - lap;
  const T flx_m = lap - lap_im;
  const T fly = lap_jp - lap;
  const T fly_m = lap - lap_jm;

  return at(0, 0) - c1 * ((flx - flx_m) + (fly - fly_m));
}

enum class ColumnField { wcon, wcon_east, ustage, upos, utens, utensstage };

/// Forward sweep + back substitution for one column. `in(field, k)` loads a
/// level, `out(k, v)` stores the output, `pivot(p, k)` rejects small pivots.
/// ccol/dcol need room for nz values.
template <class T, class In, class Out, class Pivot>
void vadvc_column(std::size_t nz, const In& in, const Out& out, T dtr, T bet_m, T bet_p,
                  T* ccol, T* dcol, const Pivot& pivot) {
  using F = ColumnField;
  auto forcing = [&](std::size_t k, const T& corr) {
    return dtr * in(F::upos, k) + in(F::utens, k) + in(F::utensstage, k) + corr;
  };

  {
    const T gcv = T(0.25) * (in(F::wcon_east, 1) + in(F::wcon, 1));
    const T cs = gcv * bet_m;
    const T c = gcv * bet_p;
    const T b = dtr - c;
    pivot(b, 0);
    const T corr = -cs * (in(F::ustage, 1) - in(F::ustage, 0));
    dcol[0] = forcing(0, corr) / b;
    ccol[0] = c / b;
  }

  for (std::size_t k = 1; k + 1 < nz; ++k) {
    const T gav = T(-0.25) * (in(F::wcon_east, k) + in(F::wcon, k));
    const T gcv = T(0.25) * (in(F::wcon_east, k + 1) + in(F::wcon, k + 1));
    const T as = gav * bet_m;
    const T cs = gcv * bet_m;
    const T acol = gav * bet_p;
    const T c = gcv * bet_p;
    const T b = dtr - acol - c;
    const T corr = -as * (in(F::ustage, k - 1) - in(F::ustage, k)) -
                   cs * (in(F::ustage, k + 1) - in(F::ustage, k));
    const T d = forcing(k, corr);
    const T p = b - ccol[k - 1] * acol;
    pivot(p, k);
    const T div = T(1) / p;
    ccol[k] = c * div;
    dcol[k] = (d - dcol[k - 1] * acol) * div;
  }

  {
    const std::size_t k = nz - 1;
    const T gav = T(-0.25) * (in(F::wcon_east, k) + in(F::wcon, k));
    const T as = gav * bet_m;
    const T acol = gav * bet_p;
    const T b = dtr - acol;
    const T corr = -as * (in(F::ustage, k - 1) - in(F::ustage, k));
    const T d = forcing(k, corr);
    const T p = b - ccol[k - 1] * acol;
    pivot(p, k);
    const T div = T(1) / p;
    ccol[k] = T(0);
    dcol[k] = (d - dcol[k - 1] * acol) * div;
  }

  T data = dcol[nz - 1];
  out(nz - 1, dtr * (data - in(F::upos, nz - 1)));
  for (std::size_t k = nz - 1; k-- > 0;) {
    data = dcol[k] - ccol[k] * data;
    out(k, dtr * (data - in(F::upos, k)));
  }
}

}  // namespace stencilsmith::detail
