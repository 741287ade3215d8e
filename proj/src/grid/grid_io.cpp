// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

// NSG1 container, little-endian:
//   "NSG1" | precision u8 | 3 reserved zero bytes | nx ny nz u64 |
//   halo.i halo.j halo.k u32 | nx*ny*nz scalars in layout order

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "stencilsmith/grid.hpp"

namespace stencilsmith {
namespace {

constexpr std::array<char, 4> kMagic{'N', 'S', 'G', '1'};

template <class U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t b = 0; b < sizeof(U); ++b)
    bytes[b] = static_cast<char>((value >> (8 * b)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(p[b]) << (8 * b);
  return v;
}

template <class T>
using BitsOf = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;

void read_exact(std::istream& in, void* dst, std::size_t n, const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw FormatError(std::string("truncated grid container (") + what + ")");
}

}  // namespace

std::size_t write_grid(const Grid3D& grid, std::ostream& sink) {
  const Dims3& d = grid.dims();
  sink.write(kMagic.data(), kMagic.size());
  put_le<std::uint8_t>(sink, static_cast<std::uint8_t>(grid.precision()));
  put_le<std::uint8_t>(sink, 0);
  put_le<std::uint16_t>(sink, 0);
  put_le<std::uint64_t>(sink, d.nx);
  put_le<std::uint64_t>(sink, d.ny);
  put_le<std::uint64_t>(sink, d.nz);
  put_le<std::uint32_t>(sink, grid.halo().i);
  put_le<std::uint32_t>(sink, grid.halo().j);
  put_le<std::uint32_t>(sink, grid.halo().k);
  grid.visit([&](auto v) {
    using T = typename decltype(v)::value_type;
    for (T x : v) put_le(sink, std::bit_cast<BitsOf<T>>(x));
  });
  if (!sink) throw FormatError("write to grid sink failed");
  return kGridHeaderBytes + grid.size() * bytes_per_element(grid.precision());
}

Grid3D read_grid(std::istream& source) {
  std::array<unsigned char, kGridHeaderBytes> header{};
  read_exact(source, header.data(), header.size(), "header");
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0)
    throw FormatError("bad magic: expected NSG1");
  const std::uint8_t code = header[4];
  if (code > 1) throw FormatError("unknown precision code " + std::to_string(code));
  if (header[5] != 0 || header[6] != 0 || header[7] != 0)
    throw FormatError("reserved header bytes must be zero");

  const Dims3 dims{get_le<std::uint64_t>(&header[8]), get_le<std::uint64_t>(&header[16]),
                   get_le<std::uint64_t>(&header[24])};
  const Halo3 halo{get_le<std::uint32_t>(&header[32]), get_le<std::uint32_t>(&header[36]),
                   get_le<std::uint32_t>(&header[40])};
  try {
    validate_dims(dims);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid dims in header: ") + e.what());
  }

  const auto precision = static_cast<Precision>(code);
  const std::size_t elem = bytes_per_element(precision);
  if (dims.volume() > std::numeric_limits<std::size_t>::max() / elem)
    throw FormatError("payload size overflows");

  // Payload length is checked against the stream before allocating.
  const auto start = source.tellg();
  if (start != std::istream::pos_type(-1)) {
    source.seekg(0, std::ios::end);
    const auto end = source.tellg();
    source.seekg(start);
    const auto available = static_cast<std::size_t>(end - start);
    if (available != dims.volume() * elem)
      throw FormatError("dims " + to_string(dims) + " need " +
                        std::to_string(dims.volume() * elem) + " payload bytes, found " +
                        std::to_string(available));
  }

  Grid3D grid(dims, halo, precision);
  grid.visit([&](auto v) {
    using T = typename decltype(v)::value_type;
    std::vector<unsigned char> raw(v.size() * sizeof(T));
    read_exact(source, raw.data(), raw.size(), "payload");
    for (std::size_t n = 0; n < v.size(); ++n)
      v[n] = std::bit_cast<T>(get_le<BitsOf<T>>(&raw[n * sizeof(T)]));
  });
  if (source.peek() != std::char_traits<char>::eof())
    throw FormatError("trailing bytes after grid payload");
  return grid;
}

void save_grid(const Grid3D& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_grid(grid, out);
}

Grid3D load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_grid(in);
}

}  // namespace stencilsmith
