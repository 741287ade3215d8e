// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stencilsmith/kernels.hpp"
#include "stencilsmith/tiling.hpp"

namespace stencilsmith {

/// PEs fed by memory channels behind a host link. Rates in GB/s and
/// GFLOP/s, powers in W, overhead in seconds.
struct MachineModel {
  double channel_bw = 12.8;
  std::size_t channels_total = 32;
  std::size_t channels_per_pe = 1;
  bool shared_channel = false;  // every PE contends for the same channels
  double host_link_bw_read = 22.1;
  double host_link_bw_write = 22.0;
  double pe_rate = 1.0;
  double invocation_overhead = 0.0;
  double power_base = 0.0;
  double power_per_channel = 1.0;
  double power_per_pe = 0.0;
  double cpu_baseline_gflops = 0.0;  // 0 when no baseline is known
  double cpu_active_power = 0.0;
};

/// Throws ModelError for non-positive bandwidths or rates, negative powers
/// or overhead, or an impossible channel layout.
void validate_model(const MachineModel& m);

struct Workload {
  std::string name;
  double bytes_read = 0.0;
  double bytes_written = 0.0;
  double flops = 0.0;
  bool device_resident = false;  // data already in device memory; no host transfer
};

/// Traffic of a tiled run: each tile reads its interior plus clipped halo
/// for the fields that are accessed off-centre (the hdiff input, vadvc's
/// wcon) and its interior for the rest. The copy workload counts one
/// operation per element copied.
Workload make_workload(const WindowPlan& plan, std::size_t bytes_per_elem,
                       bool device_resident = false);

enum class Bottleneck { host_link, channel, compute };
std::string to_string(Bottleneck b);

struct SimResult {
  double time_s = 0.0;
  double gflops = 0.0;
  double power_w = 0.0;
  double gflops_per_watt = 0.0;
  std::optional<double> speedup_vs_cpu;
  Bottleneck bottleneck = Bottleneck::compute;
  double t_host = 0.0;
  double t_channel = 0.0;
  double t_compute = 0.0;
};

/// flops / (bytes_read + bytes_written); throws ModelError on zero traffic.
double arithmetic_intensity(const Workload& w);

/// min(peak, ai·bw).
double roofline_attainable(double ai, double peak, double bw);

/// Dedicated: channels_per_pe·channel_bw. Shared: the same split evenly
/// over n_pe. Throws CapacityError when dedicated channels run out.
double effective_pe_bandwidth(const MachineModel& m, std::size_t n_pe);

/// Channels drawing power at n_pe.
std::size_t channels_in_use(const MachineModel& m, std::size_t n_pe);

/// Pipeline-max timing: the slowest of host transfer, channel transfer and
/// compute, plus the launch overhead. Ties go to compute, then host link.
SimResult simulate_run(const Workload& w, std::size_t n_pe, const MachineModel& m);

struct ScalingPoint {
  std::size_t n_pe = 0;
  std::optional<SimResult> result;  // empty when infeasible
  std::string note;
};

std::vector<ScalingPoint> scaling_curve(const Workload& w, const MachineModel& m,
                                        const std::vector<std::size_t>& pe_range);

struct EnergyReport {
  double power_w = 0.0;
  double energy_j = 0.0;
  double gflops_per_watt = 0.0;
  double cpu_efficiency = 0.0;
  double efficiency_ratio = 0.0;
};

EnergyReport energy_report(const MachineModel& m, std::size_t n_pe, const SimResult& sim);

// --- presets ----------------------------------------------------------------

struct Preset {
  std::string name;
  Kernel kernel = Kernel::vadvc;
  MachineModel model;
  Workload workload;
  std::size_t max_pe = 1;
  std::string description;
};

/// Grid the preset workloads are built on: 256×256×64 interior with the
/// stencil halo, single precision.
inline constexpr Dims3 kPresetDims{260, 260, 64};
TileSpec preset_tile(Kernel kernel);

/// hbm_ocapi, hbm_capi2, ddr4_capi2, hbm_multi_ocapi and cpu_power9 for
/// hdiff and vadvc, plus hbm_copy for the copy stencil.
const std::vector<Preset>& paper_presets();
std::vector<std::string> preset_names();
/// Throws ConfigError for unknown (name, kernel) pairs.
const Preset& find_preset(const std::string& name, Kernel kernel);

/// Overhead that makes `a = t1/overhead` sit midway in the range where
/// the first PE count whose `step` further PEs add less than `threshold`
/// throughput is `saturation_pe`, for a channel-bound stage time t1/n.
double saturation_overhead(double t1, std::size_t saturation_pe, std::size_t step,
                           double threshold);

// --- CSV --------------------------------------------------------------------

/// kernel,preset,n_pe,time_s,gflops,power_w,gflops_per_watt,bottleneck
void write_scaling_csv(std::ostream& out, const std::string& kernel, const std::string& preset,
                       const std::vector<ScalingPoint>& points);

/// kernel,preset,n_pe,power_w,energy_j,gflops_per_watt,cpu_efficiency,efficiency_ratio
void write_energy_csv(std::ostream& out, const std::string& kernel, const std::string& preset,
                      const MachineModel& m, const std::vector<ScalingPoint>& points);

}  // namespace stencilsmith
