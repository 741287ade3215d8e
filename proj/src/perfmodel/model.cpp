// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <ostream>

#include "stencilsmith/csv.hpp"
#include "stencilsmith/perfmodel.hpp"

namespace stencilsmith {

void validate_model(const MachineModel& m) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ModelError(std::string(name) + " must be positive");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0)) throw ModelError(std::string(name) + " must not be negative");
  };
  positive(m.channel_bw, "channel_bw");
  positive(m.host_link_bw_read, "host_link_bw_read");
  positive(m.host_link_bw_write, "host_link_bw_write");
  positive(m.pe_rate, "pe_rate");
  non_negative(m.invocation_overhead, "invocation_overhead");
  non_negative(m.power_base, "power_base");
  non_negative(m.power_per_channel, "power_per_channel");
  non_negative(m.power_per_pe, "power_per_pe");
  non_negative(m.cpu_baseline_gflops, "cpu_baseline_gflops");
  non_negative(m.cpu_active_power, "cpu_active_power");
  if (m.channels_per_pe < 1) throw ModelError("channels_per_pe must be at least 1");
  if (m.channels_per_pe > m.channels_total)
    throw ModelError("channels_per_pe exceeds channels_total");
}

std::string to_string(Bottleneck b) {
  switch (b) {
    case Bottleneck::host_link: return "host-link";
    case Bottleneck::channel: return "channel";
    case Bottleneck::compute: return "compute";
  }
  return "unknown";
}

Workload make_workload(const WindowPlan& plan, std::size_t bytes_per_elem,
                       bool device_resident) {
  double interior = 0.0;
  double with_halo = 0.0;
  for (const WindowTile& t : plan.tiles) {
    interior += static_cast<double>(t.interior.extent.volume());
    with_halo += static_cast<double>(t.read_region().extent.volume());
  }
  const double bpe = static_cast<double>(bytes_per_elem);

  Workload w;
  w.name = to_string(plan.kernel);
  w.device_resident = device_resident;
  w.bytes_written = interior * bpe;
  switch (plan.kernel) {
    case Kernel::hdiff:
      w.bytes_read = with_halo * bpe;
      w.flops = static_cast<double>(count_flops(Kernel::hdiff, plan.dims, plan.halo).total);
      break;
    case Kernel::vadvc:
      // wcon reads its east neighbour; ustage, upos, utens and utensstage do not.
      w.bytes_read = (with_halo + 4.0 * interior) * bpe;
      w.flops = static_cast<double>(count_flops(Kernel::vadvc, plan.dims, plan.halo).total);
      break;
    case Kernel::copy:
      w.bytes_read = interior * bpe;
      w.flops = interior;
      break;
  }
  return w;
}

double arithmetic_intensity(const Workload& w) {
  const double bytes = w.bytes_read + w.bytes_written;
  if (!(bytes > 0.0)) throw ModelError("arithmetic intensity of a workload without traffic");
  return w.flops / bytes;
}

double roofline_attainable(double ai, double peak, double bw) {
  if (ai < 0.0 || peak < 0.0 || bw < 0.0)
    throw ModelError("roofline inputs must not be negative");
  return std::min(peak, ai * bw);
}

double effective_pe_bandwidth(const MachineModel& m, std::size_t n_pe) {
  validate_model(m);
  if (n_pe < 1) throw ModelError("n_pe must be at least 1");
  const double per_pe = static_cast<double>(m.channels_per_pe) * m.channel_bw;
  if (m.shared_channel) return per_pe / static_cast<double>(n_pe);
  if (n_pe > m.channels_total / m.channels_per_pe)
    throw CapacityError(std::to_string(n_pe) + " PEs need " +
                        std::to_string(n_pe * m.channels_per_pe) + " channels, only " +
                        std::to_string(m.channels_total) + " exist");
  return per_pe;
}

std::size_t channels_in_use(const MachineModel& m, std::size_t n_pe) {
  return m.shared_channel ? m.channels_total : n_pe * m.channels_per_pe;
}

SimResult simulate_run(const Workload& w, std::size_t n_pe, const MachineModel& m) {
  if (w.bytes_read < 0.0 || w.bytes_written < 0.0 || w.flops < 0.0)
    throw ModelError("workload quantities must not be negative");
  const double bw = effective_pe_bandwidth(m, n_pe);
  const double n = static_cast<double>(n_pe);
  const double traffic = w.bytes_read + w.bytes_written;

  // Aggregate channel bandwidth; throughput is n_pe times a per-PE rate
  // for compute and dedicated channels.
  const double channel_total =
      m.shared_channel ? static_cast<double>(m.channels_per_pe) * m.channel_bw : n * bw;
  SimResult r;
  r.t_host = w.device_resident
                 ? 0.0
                 : w.bytes_read / (m.host_link_bw_read * 1e9) +
                       w.bytes_written / (m.host_link_bw_write * 1e9);
  r.t_channel = traffic / (channel_total * 1e9);
  r.t_compute = w.flops / (n * m.pe_rate * 1e9);

  double stage = r.t_compute;
  r.bottleneck = Bottleneck::compute;
  if (r.t_host > stage) {
    stage = r.t_host;
    r.bottleneck = Bottleneck::host_link;
  }
  if (r.t_channel > stage) {
    stage = r.t_channel;
    r.bottleneck = Bottleneck::channel;
  }
  r.time_s = stage + m.invocation_overhead;
  if (!(r.time_s > 0.0)) throw ModelError("workload has neither traffic nor work");

  if (m.invocation_overhead > 0.0) {
    r.gflops = w.flops / r.time_s / 1e9;
  } else if (r.bottleneck == Bottleneck::compute) {
    r.gflops = n * m.pe_rate;
  } else if (r.bottleneck == Bottleneck::channel) {
    const double ai = w.flops / traffic;
    r.gflops = m.shared_channel ? ai * channel_total : n * (ai * bw);
  } else {
    r.gflops = w.flops / r.t_host / 1e9;
  }
  r.power_w = m.power_base +
              static_cast<double>(channels_in_use(m, n_pe)) * m.power_per_channel +
              n * m.power_per_pe;
  r.gflops_per_watt = r.power_w > 0.0 ? r.gflops / r.power_w : 0.0;
  if (m.cpu_baseline_gflops > 0.0) r.speedup_vs_cpu = r.gflops / m.cpu_baseline_gflops;
  return r;
}

std::vector<ScalingPoint> scaling_curve(const Workload& w, const MachineModel& m,
                                        const std::vector<std::size_t>& pe_range) {
  if (pe_range.empty()) throw ModelError("empty PE range");
  validate_model(m);
  std::vector<ScalingPoint> out;
  out.reserve(pe_range.size());
  for (std::size_t n : pe_range) {
    ScalingPoint p;
    p.n_pe = n;
    try {
      p.result = simulate_run(w, n, m);
    } catch (const CapacityError& e) {
      p.note = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

EnergyReport energy_report(const MachineModel& m, std::size_t n_pe, const SimResult& sim) {
  (void)n_pe;
  EnergyReport r;
  r.power_w = sim.power_w;
  r.energy_j = sim.power_w * sim.time_s;
  r.gflops_per_watt = sim.gflops_per_watt;
  if (m.cpu_active_power > 0.0) r.cpu_efficiency = m.cpu_baseline_gflops / m.cpu_active_power;
  if (r.cpu_efficiency > 0.0) r.efficiency_ratio = r.gflops_per_watt / r.cpu_efficiency;
  return r;
}

double saturation_overhead(double t1, std::size_t saturation_pe, std::size_t step,
                           double threshold) {
  // time(n) = t1/n + o, a = t1/o: gain(n) = step·a / (n·(a + n + step)).
  // gain(n) < threshold  <=>  a < threshold·n·(n+step) / (step - threshold·n).
  auto bound = [&](double n) {
    const double s = static_cast<double>(step);
    const double denom = s - threshold * n;
    if (!(denom > 0.0)) throw ModelError("saturation target unreachable for this step");
    return threshold * n * (n + s) / denom;
  };
  if (saturation_pe < 2) throw ModelError("saturation_pe must be at least 2");
  const double lo = bound(static_cast<double>(saturation_pe - 1));
  const double hi = bound(static_cast<double>(saturation_pe));
  return t1 / (0.5 * (lo + hi));
}

void write_scaling_csv(std::ostream& out, const std::string& kernel, const std::string& preset,
                       const std::vector<ScalingPoint>& points) {
  out << "kernel,preset,n_pe,time_s,gflops,power_w,gflops_per_watt,bottleneck\n";
  for (const ScalingPoint& p : points) {
    csv::Row row;
    row << kernel << preset << std::uint64_t{p.n_pe};
    if (p.result)
      row << p.result->time_s << p.result->gflops << p.result->power_w
          << p.result->gflops_per_watt << to_string(p.result->bottleneck);
    else
      row << "" << "" << "" << "" << "infeasible";
    row.write(out);
  }
}

void write_energy_csv(std::ostream& out, const std::string& kernel, const std::string& preset,
                      const MachineModel& m, const std::vector<ScalingPoint>& points) {
  out << "kernel,preset,n_pe,power_w,energy_j,gflops_per_watt,cpu_efficiency,"
         "efficiency_ratio\n";
  for (const ScalingPoint& p : points) {
    csv::Row row;
    row << kernel << preset << std::uint64_t{p.n_pe};
    if (p.result) {
      const EnergyReport e = energy_report(m, p.n_pe, *p.result);
      row << e.power_w << e.energy_j << e.gflops_per_watt << e.cpu_efficiency
          << e.efficiency_ratio;
    } else {
      row << "" << "" << "" << "" << "infeasible";
    }
    row.write(out);
  }
}

}  // namespace stencilsmith
