#pragma once

#include <optional>
#include <string>

namespace cgbench {

// Analytic roofline model of a host CPU plus a many-core coprocessor
// connected over a PCIe-style link. Everything here is a model, not a
// measurement: predicted time is the binding roof of compute throughput and
// memory bandwidth, and the three execution modes (offload, symmetric,
// native) are costed from a workload's serial/parallel/transfer mix.

// Vector lanes per thread for double precision on the modeled devices.
inline constexpr double kModelVectorLanes = 8.0;

struct PlatformModel {
  std::string name;
  int cores = 1;
  int threads_per_core = 1;
  double peak_flops = 1.0;               // flop/s, double precision
  double mem_bandwidth = 1.0;            // bytes/s
  double scalar_flops_per_thread = 1.0;  // flop/s of one unvectorized thread

  int max_threads() const { return cores * threads_per_core; }
  void validate() const;
};

struct Workload {
  double serial_flops = 0.0;
  double parallel_flops = 0.0;
  double bytes_touched = 0.0;   // memory traffic of the parallel part
  double transfer_bytes = 0.0;  // host <-> device payload (offload mode)
  double comm_bytes = 0.0;      // device <-> device payload (symmetric mode)
  bool bitwise_copyable = true; // plain buffers; linked structures need
                                // virtual shared memory, which offload here
                                // does not model
  void validate() const;
};

struct PcieLink {
  double bandwidth = 8e9;  // bytes/s
  double latency = 1e-6;   // seconds per transfer
  void validate() const;
};

enum class ExecMode { Offload, Symmetric, Native };

const char* to_string(ExecMode mode);

struct ModeEstimate {
  std::optional<double> offload_s;    // absent: workload not bitwise copyable
  std::optional<double> symmetric_s;
  std::optional<double> native_s;
  ExecMode recommended = ExecMode::Offload;
  // Fraction of the parallel work placed on the CPU in symmetric mode; the
  // split equalizes both devices' finish times.
  double symmetric_cpu_share = 0.0;
};

// max(flops / min(threads * scalar_flops_per_thread * lanes, peak_flops),
//     bytes / mem_bandwidth), with lanes = kModelVectorLanes when vectorized
// and 1 otherwise. Nonincreasing in threads, nondecreasing in flops/bytes.
double device_time(const PlatformModel& model, int threads, double flops,
                   double bytes, bool vectorized);

// Costs the three modes:
//   offload   = serial on one CPU thread + transfers * (latency + payload/bw)
//               + parallel part on the saturated coprocessor
//   symmetric = serial on one CPU thread + optimally split parallel part
//               + comm payload over the link
//   native    = serial on ONE coprocessor thread + parallel part on the
//               saturated coprocessor, no link term
// Serial parts run unvectorized on a single thread; parallel parts are
// modeled vectorized at full thread count. Offload is reported unsupported
// when the workload is not bitwise copyable. Recommendation is the smallest
// supported estimate; ties break offload < symmetric < native.
ModeEstimate estimate_modes(const PlatformModel& cpu, const PlatformModel& phi,
                            const PcieLink& link, const Workload& w,
                            int transfers = 1);

// Smallest coprocessor thread count whose predicted time for the parallel
// part strictly beats the CPU at full thread count; absent when no thread
// count up to the coprocessor maximum achieves it. Rates are compared as
// given (unvectorized) unless vectorized is set.
std::optional<int> crossover_threads(const PlatformModel& phi,
                                     const PlatformModel& cpu, const Workload& w,
                                     bool vectorized = false);

// Built-in model constants: the 61-core coprocessor datasheet (1.065 Tflop/s
// double-precision peak, 352 GB/s) and a two-socket 8-core host estimate.
PlatformModel default_coprocessor();
PlatformModel default_cpu();
PcieLink default_link();

// key=value files; '#' comments and blank lines are skipped, unknown keys
// are errors, omitted keys keep the supplied defaults.
PlatformModel platform_from_file(const std::string& path, PlatformModel base);
Workload workload_from_file(const std::string& path);
PcieLink link_from_file(const std::string& path);

}  // namespace cgbench
