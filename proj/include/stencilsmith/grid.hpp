// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "stencilsmith/error.hpp"

namespace stencilsmith {

enum class Precision : std::uint8_t { f32 = 0, f64 = 1 };

std::string to_string(Precision p);
Precision parse_precision(const std::string& text);  // "f32" | "f64"
std::size_t bytes_per_element(Precision p);

template <class T>
constexpr Precision precision_of() {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  return std::is_same_v<T, float> ? Precision::f32 : Precision::f64;
}

/// Point counts per axis; i is the fastest-varying axis, k the vertical.
struct Dims3 {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  constexpr std::size_t volume() const { return nx * ny * nz; }
  constexpr std::size_t plane() const { return nx * ny; }
  friend constexpr bool operator==(const Dims3&, const Dims3&) = default;
};

struct Halo3 {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t k = 0;
  friend constexpr bool operator==(const Halo3&, const Halo3&) = default;
};

/// Halo used by hdiff and vadvc domains.
inline constexpr Halo3 kStencilHalo{2, 2, 0};

struct Coord3 {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  friend constexpr bool operator==(const Coord3&, const Coord3&) = default;
};

std::string to_string(const Coord3& c);
std::string to_string(const Dims3& d);
/// "NXxNYxNZ"; throws ConfigError on malformed text.
Dims3 parse_dims(const std::string& text);

/// Axis-aligned box [origin, origin + extent).
struct Box3 {
  Coord3 origin;
  Dims3 extent;

  constexpr bool empty() const { return extent.volume() == 0; }
  constexpr bool contains(const Coord3& c) const {
    return c.i >= origin.i && c.i < origin.i + extent.nx &&
           c.j >= origin.j && c.j < origin.j + extent.ny &&
           c.k >= origin.k && c.k < origin.k + extent.nz;
  }
  friend constexpr bool operator==(const Box3&, const Box3&) = default;
};

/// k·nx·ny + j·nx + i, without range checks.
constexpr std::size_t linear_index(std::size_t i, std::size_t j, std::size_t k,
                                   const Dims3& d) {
  return (k * d.ny + j) * d.nx + i;
}

/// Checked linear index; throws IndexError for coordinates outside `dims`.
std::size_t index(std::size_t i, std::size_t j, std::size_t k, const Dims3& dims);

/// Throws ConfigError unless every axis is non-empty and the volume fits size_t.
void validate_dims(const Dims3& dims);

/// Dense scalar field. The halo is part of the stored data; the interior is
/// the box that remains after stripping `halo` points from both ends of
/// every axis.
class Grid3D {
 public:
  Grid3D() = default;
  Grid3D(Dims3 dims, Halo3 halo, Precision precision);  // zero-filled

  const Dims3& dims() const { return dims_; }
  const Halo3& halo() const { return halo_; }
  Precision precision() const { return precision_; }
  std::size_t size() const { return dims_.volume(); }
  Box3 interior() const;

  template <class T>
  std::span<T> values() {
    check_type<T>();
    return std::get<std::vector<T>>(data_);
  }
  template <class T>
  std::span<const T> values() const {
    check_type<T>();
    return std::get<std::vector<T>>(data_);
  }

  /// Calls f(std::span<T>) with the stored element type.
  template <class F>
  decltype(auto) visit(F&& f) {
    return std::visit([&](auto& v) { return f(std::span(v)); }, data_);
  }
  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit([&](const auto& v) { return f(std::span(v)); }, data_);
  }

  /// Checked element access converting through double. Slow path for tests
  /// and tools; kernels use values<T>().
  double at(std::size_t i, std::size_t j, std::size_t k) const;
  void set(std::size_t i, std::size_t j, std::size_t k, double v);

  bool same_shape(const Grid3D& other) const {
    return dims_ == other.dims_ && halo_ == other.halo_ &&
           precision_ == other.precision_;
  }

 private:
  template <class T>
  void check_type() const {
    if (precision_of<T>() != precision_)
      throw ConfigError("grid precision is " + to_string(precision_) +
                        ", accessed as " + to_string(precision_of<T>()));
  }

  Dims3 dims_{};
  Halo3 halo_{};
  Precision precision_ = Precision::f64;
  std::variant<std::vector<float>, std::vector<double>> data_;
};

// --- initialization -------------------------------------------------------

struct ConstantInit {
  double value = 0.0;
};
/// value = a·i + b·j + c·k in full-grid coordinates.
struct LinearInit {
  double a = 0.0, b = 0.0, c = 0.0;
};
struct ImpulseInit {
  Coord3 at;
  double value = 1.0;
};
/// Layout-order draws from SplitMix64(seed): next_double() for f64 grids,
/// next_float() for f32 grids.
struct PseudoRandomInit {
  std::uint64_t seed = 0;
};

using InitSpec = std::variant<ConstantInit, LinearInit, ImpulseInit, PseudoRandomInit>;

Grid3D make_grid(const Dims3& dims, const Halo3& halo, const InitSpec& init,
                 Precision precision);

// --- binary container -----------------------------------------------------

inline constexpr std::size_t kGridHeaderBytes = 44;

/// Writes the little-endian "NSG1" container; returns bytes written.
std::size_t write_grid(const Grid3D& grid, std::ostream& sink);
Grid3D read_grid(std::istream& source);

void save_grid(const Grid3D& grid, const std::string& path);
Grid3D load_grid(const std::string& path);

// --- comparison -----------------------------------------------------------

enum class Region { all, interior };

struct CompareResult {
  double max_abs_diff = 0.0;
  std::uint64_t max_ulp_diff = 0;
  std::optional<Coord3> first_mismatch;  // first bitwise difference in layout order

  bool bitwise_equal() const { return !first_mismatch.has_value(); }
};

/// Distance in representable values; +0 and -0 are one ulp apart so that a
/// zero distance means bitwise equality.
std::uint64_t ulp_distance(float a, float b);
std::uint64_t ulp_distance(double a, double b);

CompareResult compare(const Grid3D& a, const Grid3D& b, Region region = Region::all);

/// First non-finite point in layout order, if any.
std::optional<Coord3> find_non_finite(const Grid3D& grid);

/// Neumaier-compensated f64 sum over `box`.
double compensated_sum(const Grid3D& grid, const Box3& box);

}  // namespace stencilsmith
