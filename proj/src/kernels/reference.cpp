// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "stencilsmith/kernels.hpp"
#include "stencilsmith/rng.hpp"
#include "stencilsmith/simd.hpp"

namespace stencilsmith {

std::string to_string(Kernel k) {
  switch (k) {
    case Kernel::hdiff: return "hdiff";
    case Kernel::vadvc: return "vadvc";
    case Kernel::copy: return "copy";
  }
  return "unknown";
}

Kernel parse_kernel(const std::string& text) {
  if (text == "hdiff") return Kernel::hdiff;
  if (text == "vadvc") return Kernel::vadvc;
  if (text == "copy") return Kernel::copy;
  throw ConfigError("unknown kernel '" + text + "' (expected hdiff, vadvc or copy)");
}

FieldSet make_vadvc_fields(const Dims3& dims, const Halo3& halo, Precision precision,
                           std::uint64_t seed) {
  SplitMix64 seeds(seed);
  auto field = [&] {
    return make_grid(dims, halo, PseudoRandomInit{seeds.next()}, precision);
  };
  FieldSet f{field(), field(), field(), field(), field()};
  f.wcon.visit([](auto v) {
    using T = typename decltype(v)::value_type;
    for (T& x : v) x = T(0.2) * (x - T(0.5));
  });
  return f;
}

namespace {

void require_finite(const Grid3D& g, const char* name) {
  if (auto bad = find_non_finite(g))
    throw KernelError(std::string(name) + " holds a non-finite value at " + to_string(*bad));
}

}  // namespace

void validate_fields(const FieldSet& f) {
  const Grid3D& s = f.shape();
  for (const Grid3D* g : {&f.wcon, &f.ustage, &f.upos, &f.utens})
    if (!g->same_shape(s))
      throw KernelError("vadvc fields must share dims, halo and precision");
  if (s.dims().nz < 3) throw KernelError("vadvc needs nz >= 3");
  if (s.halo().i < 1) throw KernelError("vadvc needs halo.i >= 1 for wcon(i+1)");
  if (s.halo().k != 0) throw KernelError("vadvc owns whole columns: halo.k must be 0");
  if (!std::isfinite(f.dtr_stage) || !std::isfinite(f.bet_m) || !std::isfinite(f.bet_p))
    throw KernelError("vadvc coefficients must be finite");
  if (std::abs(f.bet_m + f.bet_p - 1.0) > 1e-12)
    throw KernelError("bet_m + bet_p must equal 1");
  require_finite(f.wcon, "wcon");
  require_finite(f.ustage, "ustage");
  require_finite(f.upos, "upos");
  require_finite(f.utens, "utens");
  require_finite(f.utensstage, "utensstage");
}

void validate_hdiff_input(const Grid3D& src, const HdiffParams& params) {
  if (src.halo().i < 2 || src.halo().j < 2)
    throw KernelError("hdiff needs a horizontal halo of at least 2");
  if (!std::isfinite(params.c1)) throw KernelError("hdiff coefficient c1 must be finite");
  require_finite(src, "hdiff input");
}

double laplacian(const Grid3D& src, std::size_t i, std::size_t j, std::size_t k) {
  const Dims3& d = src.dims();
  if (i < 1 || j < 1 || i + 1 >= d.nx || j + 1 >= d.ny || k >= d.nz)
    throw IndexError("laplacian needs a full 5-point neighbourhood at " +
                     to_string(Coord3{i, j, k}));
  return src.visit([&](auto v) {
    using T = typename decltype(v)::value_type;
    const std::size_t c = linear_index(i, j, k, d);
    const T lap = T(4) * v[c] - v[c - 1] - v[c + 1] - v[c - d.nx] - v[c + d.nx];
    return static_cast<double>(lap);
  });
}

Grid3D hdiff_reference(const Grid3D& src, const HdiffParams& params) {
  validate_hdiff_input(src, params);
  Grid3D out = src;
  hdiff_region(src, out, src.interior(), params, Isa::scalar);
  return out;
}

Grid3D vadvc_reference(const FieldSet& fields) {
  validate_fields(fields);
  Grid3D out = fields.utensstage;
  vadvc_region(fields, out, fields.shape().interior(), Isa::scalar);
  return out;
}

Grid3D copy_reference(const Grid3D& src) {
  require_finite(src, "copy input");
  Grid3D out(src.dims(), src.halo(), src.precision());
  src.visit([&](auto in) {
    using T = typename decltype(in)::value_type;
    auto dst = out.values<T>();
    for (std::size_t n = 0; n < in.size(); ++n) dst[n] = in[n];
  });
  return out;
}

TridiagonalSystem vadvc_column_system(const FieldSet& f, std::size_t i, std::size_t j) {
  const Grid3D& s = f.shape();
  const Dims3& d = s.dims();
  const Box3 inner = s.interior();
  if (!inner.contains(Coord3{i, j, 0}))
    throw IndexError("column " + to_string(Coord3{i, j, 0}) + " is not an interior column");
  const std::size_t nz = d.nz;

  // Coefficients as the kernel sees them in the grid's precision.
  auto as_grid = [&](double x) {
    return s.precision() == Precision::f32 ? static_cast<double>(static_cast<float>(x)) : x;
  };
  const double dtr = as_grid(f.dtr_stage);
  const double bm = as_grid(f.bet_m);
  const double bp = as_grid(f.bet_p);
  auto w = [&](std::size_t ii, std::size_t k) { return f.wcon.at(ii, j, k); };
  auto us = [&](std::size_t k) { return f.ustage.at(i, j, k); };
  auto forcing = [&](std::size_t k) {
    return dtr * f.upos.at(i, j, k) + f.utens.at(i, j, k) + f.utensstage.at(i, j, k);
  };

  TridiagonalSystem sys;
  sys.lower.assign(nz, 0.0);
  sys.diag.assign(nz, 0.0);
  sys.upper.assign(nz, 0.0);
  sys.rhs.assign(nz, 0.0);
  for (std::size_t k = 0; k < nz; ++k) {
    double acol = 0.0, as = 0.0, ccol = 0.0, cs = 0.0, corr = 0.0;
    if (k > 0) {
      const double gav = -0.25 * (w(i + 1, k) + w(i, k));
      as = gav * bm;
      acol = gav * bp;
      corr -= as * (us(k - 1) - us(k));
    }
    if (k + 1 < nz) {
      const double gcv = 0.25 * (w(i + 1, k + 1) + w(i, k + 1));
      cs = gcv * bm;
      ccol = gcv * bp;
      corr -= cs * (us(k + 1) - us(k));
    }
    sys.lower[k] = acol;
    sys.diag[k] = dtr - acol - ccol;
    sys.upper[k] = ccol;
    sys.rhs[k] = forcing(k) + corr;
  }
  return sys;
}

}  // namespace stencilsmith
