// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "stencilsmith/cli.hpp"
#include "stencilsmith/csv.hpp"
#include "stencilsmith/perfmodel.hpp"

namespace stencilsmith::cli {

namespace {

Kernel require_kernel(const RunConfig& c) {
  if (!c.kernel) throw ConfigError("missing --kernel (hdiff, vadvc or copy)");
  return *c.kernel;
}

/// Inputs for one kernel invocation, generated from the seed.
struct Inputs {
  Grid3D src;      // hdiff and copy
  FieldSet fields; // vadvc
};

Inputs make_inputs(Kernel k, const Dims3& dims, Precision p, std::uint64_t seed) {
  Inputs in;
  if (k == Kernel::vadvc)
    in.fields = make_vadvc_fields(dims, kStencilHalo, p, seed);
  else
    in.src = make_grid(dims, kStencilHalo, PseudoRandomInit{seed}, p);
  return in;
}

Grid3D execute(Kernel k, const Inputs& in, const HdiffParams& hp, const WindowPlan& plan,
               unsigned workers, const ExecOptions& opts) {
  switch (k) {
    case Kernel::hdiff: return execute_tiled(in.src, hp, plan, workers, opts);
    case Kernel::vadvc: return execute_tiled(in.fields, plan, workers, opts);
    case Kernel::copy: return execute_tiled_copy(in.src, plan, workers, opts);
  }
  throw ConfigError("unknown kernel");
}

Grid3D reference(Kernel k, const Inputs& in, const HdiffParams& hp) {
  switch (k) {
    case Kernel::hdiff: return hdiff_reference(in.src, hp);
    case Kernel::vadvc: return vadvc_reference(in.fields);
    case Kernel::copy: return copy_reference(in.src);
  }
  throw ConfigError("unknown kernel");
}

WindowPlan make_plan(const RunConfig& c, Kernel k, const Dims3& dims) {
  WindowPlan plan = plan_windows(dims, resolved_tile(c, dims), k, kStencilHalo, c.workers);
  if (c.corrupt_plan && !plan.tiles.empty()) plan.tiles.pop_back();
  return plan;
}

/// Largest per-column error of `out` against the tridiagonal oracle, each
/// column's error taken relative to its largest expected magnitude.
double vadvc_oracle_error(const FieldSet& f, const Grid3D& out) {
  const Box3 inner = f.shape().interior();
  const std::size_t nz = f.shape().dims().nz;
  double worst = 0.0;
  for (std::size_t j = inner.origin.j; j < inner.origin.j + inner.extent.ny; ++j)
    for (std::size_t i = inner.origin.i; i < inner.origin.i + inner.extent.nx; ++i) {
      const TridiagonalSystem sys = vadvc_column_system(f, i, j);
      const std::vector<double> x = thomas_solve<double>(sys.lower, sys.diag, sys.upper, sys.rhs);
      const double dtr = f.shape().precision() == Precision::f32
                             ? static_cast<double>(static_cast<float>(f.dtr_stage))
                             : f.dtr_stage;
      double err = 0.0;
      double scale = 0.0;
      for (std::size_t k = 0; k < nz; ++k) {
        const double expected = dtr * (x[k] - f.upos.at(i, j, k));
        err = std::max(err, std::abs(out.at(i, j, k) - expected));
        scale = std::max(scale, std::abs(expected));
      }
      worst = std::max(worst, scale > 0.0 ? err / scale : err);
    }
  return worst;
}

/// Writes to the configured file, or to `fallback`.
template <class F>
void emit(const std::optional<std::string>& path, std::ostream& fallback, F&& write) {
  if (!path) {
    write(fallback);
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + *path + "'");
  write(file);
  if (!file) throw ExecutionError("write to '" + *path + "' failed");
}

std::vector<std::size_t> one_to(std::size_t n) {
  std::vector<std::size_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i + 1;
  return r;
}

const Preset& model_preset(const RunConfig& c, Kernel k) {
  if (k == Kernel::copy && !c.preset_set) return find_preset("hbm_copy", k);
  return find_preset(c.preset, k);
}

std::size_t model_bytes_per_elem(const RunConfig& c) {
  if (c.bytes_per_elem) return *c.bytes_per_elem;
  return c.precision ? bytes_per_element(*c.precision) : 4;
}

}  // namespace

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Kernel k = require_kernel(c);
  const Dims3 dims = resolved_dims(c);
  const Precision p = resolved_precision(c);
  const HdiffParams hp{c.c1};
  const WindowPlan plan = make_plan(c, k, dims);
  const Inputs in = make_inputs(k, dims, p, c.seed);
  const ExecOptions opts{c.isa};

  const Grid3D tiled = execute(k, in, hp, plan, c.workers, opts);
  const Grid3D ref = reference(k, in, hp);
  const CompareResult cmp = compare(tiled, ref);

  out << "kernel=" << to_string(k) << " dims=" << to_string(dims)
      << " tile=" << to_string(plan.tile) << " workers=" << effective_workers(c.workers)
      << " precision=" << to_string(p) << " isa=" << to_string(opts.isa.value_or(default_isa()))
      << "\n";
  out << "max_ulp_diff=" << cmp.max_ulp_diff << "\n";
  bool ok = cmp.bitwise_equal();
  if (!ok) out << "first_mismatch=" << to_string(*cmp.first_mismatch) << "\n";

  if (k == Kernel::vadvc) {
    const double err = vadvc_oracle_error(in.fields, tiled);
    const double tol = p == Precision::f64 ? 1e-12 : 1e-6;
    out << "max_rel_error=" << csv::number(err) << " tolerance=" << csv::number(tol) << "\n";
    ok = ok && err <= tol;
  }
  out << (ok ? "PASS" : "FAIL") << "\n";
  (void)log;
  return ok ? kExitOk : kExitFailure;
}

int cmd_bench(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Kernel k = require_kernel(c);
  const Dims3 dims = resolved_dims(c);
  const Precision p = resolved_precision(c);
  const HdiffParams hp{c.c1};
  const WindowPlan plan = make_plan(c, k, dims);
  const Inputs in = make_inputs(k, dims, p, c.seed);
  const ExecOptions opts{c.isa};
  const unsigned workers = effective_workers(c.workers);

  using clock = std::chrono::steady_clock;
  Grid3D result = execute(k, in, hp, plan, workers, opts);  // warm-up
  std::vector<double> times;
  for (std::size_t r = 0; r < c.reps; ++r) {
    const auto t0 = clock::now();
    result = execute(k, in, hp, plan, workers, opts);
    times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t n = times.size();
  const double median = n % 2 == 1 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
  const double flops = static_cast<double>(count_flops(k, dims, kStencilHalo).total);
  const double checksum = compensated_sum(result, result.interior());

  emit(c.out, out, [&](std::ostream& s) {
    s << "kernel,nx,ny,nz,tile,workers,precision,time_s,gflops,checksum\n";
    csv::Row row;
    row << to_string(k) << std::uint64_t{dims.nx} << std::uint64_t{dims.ny}
        << std::uint64_t{dims.nz} << to_string(plan.tile) << std::uint64_t{workers}
        << to_string(p) << median << (median > 0.0 ? flops / median / 1e9 : 0.0) << checksum;
    row.write(s);
  });
  if (c.out) log << "wrote " << *c.out << "\n";
  return kExitOk;
}

int cmd_model(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Kernel k = require_kernel(c);
  const Preset& preset = model_preset(c, k);
  Workload w = preset.workload;
  if (c.dims || c.tile || c.precision || c.bytes_per_elem) {
    const Dims3 dims = c.dims.value_or(kPresetDims);
    const TileSpec tile = c.tile ? *c.tile : resolved_tile(c, dims);
    w = make_workload(plan_windows(dims, tile, k), model_bytes_per_elem(c), true);
  }
  const auto points = scaling_curve(w, preset.model, one_to(c.max_pe.value_or(preset.max_pe)));

  std::vector<ScalingPoint> cpu_points;
  const MachineModel* cpu_model = nullptr;
  if (k != Kernel::copy && preset.name != "cpu_power9") {
    const Preset& cpu = find_preset("cpu_power9", k);
    cpu_model = &cpu.model;
    cpu_points = scaling_curve(w, cpu.model, {1});
  }

  const std::string kernel = to_string(k);
  emit(c.out, out, [&](std::ostream& s) {
    write_scaling_csv(s, kernel, preset.name, points);
    if (!cpu_points.empty()) {
      std::ostringstream extra;
      write_scaling_csv(extra, kernel, "cpu_power9", cpu_points);
      const std::string text = extra.str();
      s << text.substr(text.find('\n') + 1);  // rows only
    }
  });
  std::optional<std::string> energy_path = c.energy_out;
  if (!energy_path && c.out) energy_path = *c.out + ".energy.csv";
  if (!energy_path) out << "\n";
  emit(energy_path, out, [&](std::ostream& s) {
    write_energy_csv(s, kernel, preset.name, preset.model, points);
    if (cpu_model != nullptr) {
      std::ostringstream extra;
      write_energy_csv(extra, kernel, "cpu_power9", *cpu_model, cpu_points);
      const std::string text = extra.str();
      s << text.substr(text.find('\n') + 1);
    }
  });
  if (c.out) log << "wrote " << *c.out << "\n";
  if (energy_path) log << "wrote " << *energy_path << "\n";
  return kExitOk;
}

int cmd_tune(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Kernel k = require_kernel(c);
  const Dims3 dims = resolved_dims(c);
  const Preset& preset = model_preset(c, k);
  const SearchSpace space = default_space(k, dims, model_bytes_per_elem(c), c.budget);

  SearchMode mode = SearchMode::exhaustive();
  if (c.mode == "random") mode = SearchMode::random(c.samples, c.seed);
  if (c.mode == "hillclimb") mode = SearchMode::hillclimb(c.starts, c.seed);
  const SearchResult result = search(space, mode, preset.model);

  emit(c.out, out, [&](std::ostream& s) { write_tune_csv(s, space, result); });
  std::ostream& info = c.out ? out : log;

  bool ok = true;
  if (mode.kind != SearchMode::Kind::exhaustive) {
    const SearchResult full = search(space, SearchMode::exhaustive(), preset.model);
    for (const ParetoPoint& p : result.front) {
      const bool covered = std::any_of(full.front.begin(), full.front.end(), [&](const auto& q) {
        return q.throughput >= p.throughput && q.footprint <= p.footprint;
      });
      if (!covered) {
        ok = false;
        info << "front point " << to_string(p.tile) << " escapes the exhaustive front\n";
      }
    }
    info << "dominance=" << (ok ? "ok" : "violated") << "\n";
  }

  const ParetoPoint pick =
      pick_operating_point(result.front, c.budget.value_or(static_cast<std::size_t>(-1)));
  info << "evaluations=" << result.evaluations << " front=" << result.front.size() << "\n";
  info << "picked tile=" << to_string(pick.tile) << " gflops_model=" << csv::number(pick.throughput)
       << " footprint_bytes=" << pick.footprint << "\n";
  return ok ? kExitOk : kExitFailure;
}

int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Kernel k = require_kernel(c);
  if (!c.out) throw ConfigError("run needs --out for the output grid");
  const Dims3 dims = resolved_dims(c);
  const Precision p = resolved_precision(c);
  const WindowPlan plan = make_plan(c, k, dims);
  const Inputs in = make_inputs(k, dims, p, c.seed);
  const Grid3D result = execute(k, in, HdiffParams{c.c1}, plan, c.workers, ExecOptions{c.isa});
  save_grid(result, *c.out);
  out << "wrote " << *c.out << " (" << to_string(k) << " " << to_string(dims) << " "
      << to_string(p) << ") checksum=" << csv::number(compensated_sum(result, result.interior()))
      << "\n";
  (void)log;
  return kExitOk;
}

}  // namespace stencilsmith::cli
