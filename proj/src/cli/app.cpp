// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <functional>
#include <ostream>
#include <utility>

#include "CLI11.hpp"
#include "stencilsmith/cli.hpp"

namespace stencilsmith::cli {

namespace {

struct Flag {
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"kernel", "hdiff, vadvc or copy"},
    {"dims", "grid dimensions NXxNYxNZ including halo (default 68x68x64)"},
    {"tile", "tile extents TXxTYxTZ in interior points"},
    {"workers", "worker threads for the tiled executor"},
    {"precision", "f32 or f64"},
    {"seed", "seed of the synthetic inputs and of heuristic search"},
    {"preset", "machine preset of the model and the tuner"},
    {"config", "key=value file; flags override its entries"},
    {"out", "output path (CSV, or grid file for run)"},
    {"energy-out", "energy CSV path for model"},
    {"budget", "tile footprint budget in bytes for tune"},
    {"bytes-per-elem", "element size in the cost model: 2, 4 or 8"},
    {"mode", "tune strategy: exhaustive, random or hillclimb"},
    {"samples", "points drawn by random search"},
    {"starts", "starting points of hillclimb"},
    {"max-pe", "largest PE count of the model curve"},
    {"reps", "timed repetitions for bench (at least 5)"},
    {"isa", "kernel variant: scalar, avx2 or neon"},
    {"c1", "hdiff diffusion coefficient"},
};

using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Stencil kernels for weather dycores: verify, benchmark, model and tune."};
  app.name("stencilsmith");
  app.require_subcommand(1);

  const std::pair<const char*, Command> commands[] = {
      {"verify", cmd_verify}, {"bench", cmd_bench}, {"model", cmd_model},
      {"tune", cmd_tune},     {"run", cmd_run}};
  const char* summaries[] = {"check tiled output against the reference kernels",
                             "time tiled execution and print a CSV row",
                             "emit modelled scaling and energy CSVs",
                             "search tile sizes and print the operating point",
                             "execute once and write the output grid"};

  Settings values;
  std::vector<std::pair<CLI::Option*, std::string>> options;
  std::vector<std::pair<CLI::App*, Command>> subs;
  bool corrupt = false;
  for (std::size_t n = 0; n < std::size(commands); ++n) {
    CLI::App* sub = app.add_subcommand(commands[n].first, summaries[n]);
    for (const Flag& f : kFlags)
      options.emplace_back(sub->add_option(std::string("--") + f.key, values[f.key], f.help),
                           f.key);
    options.emplace_back(sub->add_flag("--corrupt-plan", corrupt)->group(""), "corrupt-plan");
    subs.emplace_back(sub, commands[n].second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, log);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Settings settings;
    for (const auto& [opt, key] : options)
      if (key == "config" && opt->count() > 0) settings = load_settings(values["config"]);
    for (const auto& [opt, key] : options) {
      if (opt->count() == 0 || key == "config") continue;
      settings[key] = key == "corrupt-plan" ? "true" : values[key];
    }
    const RunConfig config = to_run_config(settings);
    for (const auto& [sub, command] : subs)
      if (sub->parsed()) return command(config, out, log);
    return kExitConfig;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace stencilsmith::cli
