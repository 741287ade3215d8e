// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "stencilsmith/autotune.hpp"
#include "stencilsmith/grid.hpp"
#include "stencilsmith/kernels.hpp"
#include "stencilsmith/simd.hpp"
#include "stencilsmith/tiling.hpp"

namespace stencilsmith::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Raw key=value settings, keyed by long flag name without dashes.
using Settings = std::map<std::string, std::string>;

/// Flat text file: one `key = value` per line, '#' starts a comment.
/// Throws ConfigError on unreadable files, malformed lines or unknown keys.
Settings load_settings(const std::string& path);
Settings parse_settings(std::istream& in, const std::string& origin = "<config>");

/// Keys accepted in config files and as flags.
bool known_key(const std::string& key);

struct RunConfig {
  std::optional<Kernel> kernel;
  std::optional<Dims3> dims;
  std::optional<TileSpec> tile;
  unsigned workers = 1;
  std::optional<Precision> precision;
  std::uint64_t seed = 0;
  double c1 = HdiffParams{}.c1;
  std::string preset = "hbm_ocapi";
  bool preset_set = false;
  std::optional<std::string> out;
  std::optional<std::string> energy_out;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> bytes_per_elem;
  std::string mode = "exhaustive";
  std::size_t samples = 32;
  std::size_t starts = 4;
  std::optional<std::size_t> max_pe;
  std::size_t reps = 5;
  std::optional<Isa> isa;
  bool corrupt_plan = false;  // test hook: drop the last tile of the plan
};

/// Converts settings to typed values; throws ConfigError on any bad value.
RunConfig to_run_config(const Settings& settings);

/// Dims, tile and precision with command defaults filled in.
Dims3 resolved_dims(const RunConfig& c);
TileSpec resolved_tile(const RunConfig& c, const Dims3& dims);
Precision resolved_precision(const RunConfig& c);

/// Each returns an exit code; CSV goes to `out` unless an output path is
/// configured, human-readable lines go to `log`.
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_bench(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_model(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_tune(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& log);

/// Full command line: subcommand dispatch, config loading, flag overrides
/// and error-to-exit-code mapping.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace stencilsmith::cli
