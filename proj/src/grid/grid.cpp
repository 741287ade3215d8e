// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include "stencilsmith/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "stencilsmith/rng.hpp"

namespace stencilsmith {

std::string to_string(Precision p) { return p == Precision::f32 ? "f32" : "f64"; }

Precision parse_precision(const std::string& text) {
  if (text == "f32") return Precision::f32;
  if (text == "f64") return Precision::f64;
  throw ConfigError("unknown precision '" + text + "' (expected f32 or f64)");
}

std::size_t bytes_per_element(Precision p) { return p == Precision::f32 ? 4 : 8; }

std::string to_string(const Coord3& c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + "," +
         std::to_string(c.k) + ")";
}

std::string to_string(const Dims3& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

Dims3 parse_dims(const std::string& text) {
  std::size_t values[3] = {0, 0, 0};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int axis = 0; axis < 3; ++axis) {
    auto [next, ec] = std::from_chars(p, end, values[axis]);
    const bool last = axis == 2;
    if (ec != std::errc{} || (last ? next != end : (next == end || *next != 'x')))
      throw ConfigError("expected NXxNYxNZ, got '" + text + "'");
    p = last ? next : next + 1;
  }
  return Dims3{values[0], values[1], values[2]};
}

std::size_t index(std::size_t i, std::size_t j, std::size_t k, const Dims3& dims) {
  if (i >= dims.nx || j >= dims.ny || k >= dims.nz)
    throw IndexError("coordinate " + to_string(Coord3{i, j, k}) +
                     " outside dims " + to_string(dims));
  return linear_index(i, j, k, dims);
}

void validate_dims(const Dims3& dims) {
  if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0)
    throw ConfigError("zero-sized axis in dims " + to_string(dims));
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  if (dims.nx > kMax / dims.ny || dims.nx * dims.ny > kMax / dims.nz)
    throw ConfigError("dims " + to_string(dims) + " overflow the address space");
}

Grid3D::Grid3D(Dims3 dims, Halo3 halo, Precision precision)
    : dims_(dims), halo_(halo), precision_(precision) {
  validate_dims(dims);
  if (precision == Precision::f32)
    data_ = std::vector<float>(dims.volume(), 0.0f);
  else
    data_ = std::vector<double>(dims.volume(), 0.0);
}

Box3 Grid3D::interior() const {
  auto inner = [](std::size_t n, std::uint32_t h) -> std::size_t {
    return n > 2 * std::size_t{h} ? n - 2 * std::size_t{h} : 0;
  };
  return Box3{{halo_.i, halo_.j, halo_.k},
              {inner(dims_.nx, halo_.i), inner(dims_.ny, halo_.j), inner(dims_.nz, halo_.k)}};
}

double Grid3D::at(std::size_t i, std::size_t j, std::size_t k) const {
  const std::size_t idx = index(i, j, k, dims_);
  return visit([idx](auto v) { return static_cast<double>(v[idx]); });
}

void Grid3D::set(std::size_t i, std::size_t j, std::size_t k, double value) {
  const std::size_t idx = index(i, j, k, dims_);
  visit([idx, value](auto v) {
    using T = typename decltype(v)::value_type;
    v[idx] = static_cast<T>(value);
  });
}

namespace {

template <class T>
void fill(std::span<T> out, const Dims3& d, const InitSpec& init) {
  struct Filler {
    std::span<T> out;
    const Dims3& d;

    void operator()(const ConstantInit& c) const {
      std::fill(out.begin(), out.end(), static_cast<T>(c.value));
    }
    void operator()(const LinearInit& l) const {
      for (std::size_t k = 0; k < d.nz; ++k)
        for (std::size_t j = 0; j < d.ny; ++j)
          for (std::size_t i = 0; i < d.nx; ++i)
            out[linear_index(i, j, k, d)] = static_cast<T>(
                l.a * static_cast<double>(i) + l.b * static_cast<double>(j) +
                l.c * static_cast<double>(k));
    }
    void operator()(const ImpulseInit& p) const {
      std::fill(out.begin(), out.end(), T{0});
      out[index(p.at.i, p.at.j, p.at.k, d)] = static_cast<T>(p.value);
    }
    void operator()(const PseudoRandomInit& r) const {
      SplitMix64 rng(r.seed);
      for (T& v : out) {
        if constexpr (std::is_same_v<T, float>)
          v = rng.next_float();
        else
          v = rng.next_double();
      }
    }
  };
  std::visit(Filler{out, d}, init);
}

}  // namespace

Grid3D make_grid(const Dims3& dims, const Halo3& halo, const InitSpec& init,
                 Precision precision) {
  Grid3D grid(dims, halo, precision);
  grid.visit([&](auto v) { fill(v, dims, init); });
  return grid;
}

std::optional<Coord3> find_non_finite(const Grid3D& grid) {
  const Dims3& d = grid.dims();
  return grid.visit([&](auto v) -> std::optional<Coord3> {
    for (std::size_t n = 0; n < v.size(); ++n) {
      if (!std::isfinite(v[n]))
        return Coord3{n % d.nx, (n / d.nx) % d.ny, n / d.plane()};
    }
    return std::nullopt;
  });
}

double compensated_sum(const Grid3D& grid, const Box3& box) {
  const Dims3& d = grid.dims();
  return grid.visit([&](auto v) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t k = box.origin.k; k < box.origin.k + box.extent.nz; ++k)
      for (std::size_t j = box.origin.j; j < box.origin.j + box.extent.ny; ++j)
        for (std::size_t i = box.origin.i; i < box.origin.i + box.extent.nx; ++i) {
          const double x = static_cast<double>(v[linear_index(i, j, k, d)]);
          const double t = sum + x;
          if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
          else
            comp += (x - t) + sum;
          sum = t;
        }
    return sum + comp;
  });
}

}  // namespace stencilsmith
