// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "stencilsmith/cli.hpp"
#include "stencilsmith/perfmodel.hpp"

namespace stencilsmith::cli {

namespace {

constexpr std::array<const char*, 20> kKeys = {
    "kernel",  "dims",    "tile",  "workers",  "precision", "seed",  "preset",
    "out",     "energy-out", "budget", "bytes-per-elem", "mode", "samples", "starts",
    "max-pe",  "reps",    "isa",   "corrupt-plan", "config", "c1"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_unsigned(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || p != end)
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

}  // namespace

bool known_key(const std::string& key) {
  return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

Settings parse_settings(std::istream& in, const std::string& origin) {
  Settings out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!known_key(key) || key == "config")
      throw ConfigError(origin + ":" + std::to_string(n) + ": unknown key '" + key + "'");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings load_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_settings(in, path);
}

RunConfig to_run_config(const Settings& s) {
  RunConfig c;
  for (const auto& [key, value] : s) {
    if (key == "kernel") {
      c.kernel = parse_kernel(value);
    } else if (key == "dims") {
      c.dims = parse_dims(value);
      validate_dims(*c.dims);
    } else if (key == "tile") {
      c.tile = parse_tile(value);
    } else if (key == "workers") {
      c.workers = parse_unsigned<unsigned>(key, value);
      if (c.workers == 0) throw ConfigError("workers must be at least 1");
    } else if (key == "precision") {
      c.precision = parse_precision(value);
    } else if (key == "seed") {
      c.seed = parse_unsigned<std::uint64_t>(key, value);
    } else if (key == "preset") {
      const auto names = preset_names();
      if (std::find(names.begin(), names.end(), value) == names.end())
        throw ConfigError("unknown preset '" + value + "'");
      c.preset = value;
      c.preset_set = true;
    } else if (key == "out") {
      c.out = value;
    } else if (key == "energy-out") {
      c.energy_out = value;
    } else if (key == "budget") {
      c.budget = parse_unsigned<std::size_t>(key, value);
    } else if (key == "bytes-per-elem") {
      c.bytes_per_elem = parse_unsigned<std::size_t>(key, value);
      if (*c.bytes_per_elem != 2 && *c.bytes_per_elem != 4 && *c.bytes_per_elem != 8)
        throw ConfigError("bytes-per-elem must be 2, 4 or 8");
    } else if (key == "mode") {
      if (value != "exhaustive" && value != "random" && value != "hillclimb")
        throw ConfigError("mode must be exhaustive, random or hillclimb");
      c.mode = value;
    } else if (key == "samples") {
      c.samples = parse_unsigned<std::size_t>(key, value);
    } else if (key == "starts") {
      c.starts = parse_unsigned<std::size_t>(key, value);
    } else if (key == "max-pe") {
      c.max_pe = parse_unsigned<std::size_t>(key, value);
      if (*c.max_pe == 0) throw ConfigError("max-pe must be at least 1");
    } else if (key == "reps") {
      c.reps = parse_unsigned<std::size_t>(key, value);
      if (c.reps < 5) throw ConfigError("reps must be at least 5");
    } else if (key == "isa") {
      c.isa = parse_isa(value);
      if (!isa_available(*c.isa)) throw ConfigError("ISA " + value + " is not available here");
    } else if (key == "corrupt-plan") {
      c.corrupt_plan = parse_bool(key, value);
    } else if (key == "c1") {
      const char* end = value.data() + value.size();
      auto [p, ec] = std::from_chars(value.data(), end, c.c1);
      if (value.empty() || ec != std::errc{} || p != end || !std::isfinite(c.c1))
        throw ConfigError("c1: expected a finite number, got '" + value + "'");
    } else if (key == "config") {
      // consumed by the caller
    } else {
      throw ConfigError("unknown setting '" + key + "'");
    }
  }
  return c;
}

Dims3 resolved_dims(const RunConfig& c) { return c.dims.value_or(Dims3{68, 68, 64}); }

TileSpec resolved_tile(const RunConfig& c, const Dims3& dims) {
  if (c.tile) return *c.tile;
  const Kernel k = c.kernel.value_or(Kernel::hdiff);
  TileSpec t = preset_tile(k);
  const Halo3 h = kStencilHalo;
  auto inner = [](std::size_t n, std::uint32_t halo) {
    return n > 2 * std::size_t{halo} ? n - 2 * std::size_t{halo} : std::size_t{1};
  };
  t.tx = std::min(t.tx, inner(dims.nx, h.i));
  t.ty = std::min(t.ty, inner(dims.ny, h.j));
  t.tz = k == Kernel::vadvc ? dims.nz : std::min(t.tz, inner(dims.nz, h.k));
  return t;
}

Precision resolved_precision(const RunConfig& c) { return c.precision.value_or(Precision::f64); }

}  // namespace stencilsmith::cli
