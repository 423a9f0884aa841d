#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cgbench/errors.hpp"
#include "cgbench/mode_model.hpp"

using namespace cgbench;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cgbench_model_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

PlatformModel crossover_cpu() {
  PlatformModel m;
  m.name = "cpu-fixture";
  m.cores = 16;
  m.threads_per_core = 1;
  m.scalar_flops_per_thread = 10e9;
  m.peak_flops = 160e9;
  m.mem_bandwidth = 100e9;
  return m;
}

PlatformModel crossover_phi() {
  PlatformModel m;
  m.name = "phi-fixture";
  m.cores = 61;
  m.threads_per_core = 4;
  m.scalar_flops_per_thread = 2e9;
  m.peak_flops = 162e9;
  m.mem_bandwidth = 100e9;
  return m;
}

}  // namespace

TEST_CASE("table defaults carry the datasheet constants") {
  const PlatformModel phi = default_coprocessor();
  CHECK(phi.peak_flops == 1.065e12);
  CHECK(phi.mem_bandwidth == 352e9);
  CHECK(phi.cores == 61);
  CHECK(phi.threads_per_core == 4);
  CHECK(phi.max_threads() == 244);
  phi.validate();
  default_cpu().validate();
  default_link().validate();
}

TEST_CASE("device_time roofs") {
  const PlatformModel phi = default_coprocessor();
  // pure memory bound
  CHECK(device_time(phi, 10, 0.0, 352e9, true) == 1.0);
  CHECK(device_time(phi, 10, 0.0, 176e9, false) == 0.5);
  // compute roof at saturation: the peak itself takes one second
  CHECK(device_time(phi, phi.max_threads(), 1.065e12, 0.0, true) == 1.0);
  // one scalar thread
  CHECK(device_time(phi, 1, 2.182e9, 0.0, false) == 1.0);
  CHECK_THROWS_AS(device_time(phi, 0, 1.0, 1.0, true), std::invalid_argument);
}

TEST_CASE("device_time is monotone in threads, flops and bytes") {
  const PlatformModel phi = default_coprocessor();
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    const double flops = static_cast<double>(rng() % 1000000) * 1e6;
    const double bytes = static_cast<double>(rng() % 1000000) * 1e3;
    double prev = device_time(phi, 1, flops, bytes, true);
    for (int t = 2; t <= phi.max_threads(); t *= 2) {
      const double cur = device_time(phi, t, flops, bytes, true);
      CHECK(cur <= prev);
      prev = cur;
    }
    CHECK(device_time(phi, 8, flops * 2, bytes, true) >=
          device_time(phi, 8, flops, bytes, true));
    CHECK(device_time(phi, 8, flops, bytes * 2, true) >=
          device_time(phi, 8, flops, bytes, true));
  }
}

TEST_CASE("degenerate workload ties break toward offload") {
  const ModeEstimate est =
      estimate_modes(default_cpu(), default_coprocessor(), default_link(), Workload{});
  REQUIRE(est.offload_s.has_value());
  REQUIRE(est.native_s.has_value());
  CHECK(*est.offload_s == 0.0);
  CHECK(*est.symmetric_s == 0.0);
  CHECK(*est.native_s == 0.0);
  CHECK(est.recommended == ExecMode::Offload);
}

TEST_CASE("offload equals native on zero-serial zero-transfer workloads") {
  Workload w;
  w.parallel_flops = 1e12;
  w.bytes_touched = 1e10;
  const ModeEstimate est =
      estimate_modes(default_cpu(), default_coprocessor(), default_link(), w);
  REQUIRE(est.offload_s.has_value());
  CHECK(*est.offload_s == *est.native_s);  // both are the phi parallel term
  // work sharing strictly beats either device alone
  CHECK(*est.symmetric_s < *est.offload_s);
  CHECK(est.recommended == ExecMode::Symmetric);
}

TEST_CASE("serial-heavy workloads favor the faster scalar host") {
  PlatformModel cpu = default_cpu();
  PlatformModel phi = default_coprocessor();
  cpu.scalar_flops_per_thread = 10.0 * phi.scalar_flops_per_thread;
  Workload w;
  w.serial_flops = 1e12;
  const ModeEstimate est = estimate_modes(cpu, phi, default_link(), w);
  REQUIRE(est.offload_s.has_value());
  CHECK(*est.offload_s < *est.native_s);
  CHECK(*est.symmetric_s < *est.native_s);
  CHECK(est.recommended == ExecMode::Offload);
}

TEST_CASE("non-copyable workloads cannot offload") {
  Workload w;
  w.parallel_flops = 1e12;
  w.bitwise_copyable = false;
  const ModeEstimate est =
      estimate_modes(default_cpu(), default_coprocessor(), default_link(), w);
  CHECK_FALSE(est.offload_s.has_value());
  CHECK((est.recommended == ExecMode::Symmetric || est.recommended == ExecMode::Native));
}

TEST_CASE("offload minus native is exactly the link terms") {
  Workload w;
  w.parallel_flops = 3e12;
  w.bytes_touched = 1e9;
  w.transfer_bytes = 4e9;
  const PcieLink link = default_link();
  const ModeEstimate est = estimate_modes(default_cpu(), default_coprocessor(), link, w);
  REQUIRE(est.offload_s.has_value());
  const double link_term = link.latency + w.transfer_bytes / link.bandwidth;
  CHECK(*est.offload_s - *est.native_s == doctest::Approx(link_term).epsilon(1e-12));

  // the transfers multiplier scales the whole link term
  const ModeEstimate est3 =
      estimate_modes(default_cpu(), default_coprocessor(), link, w, 3);
  CHECK(*est3.offload_s - *est.offload_s ==
        doctest::Approx(2.0 * link_term).epsilon(1e-12));
}

TEST_CASE("symmetric split equalizes finish times") {
  Workload w;
  w.parallel_flops = 1e12;  // compute bound: bytes zero
  const PlatformModel cpu = default_cpu();
  const PlatformModel phi = default_coprocessor();
  const ModeEstimate est = estimate_modes(cpu, phi, default_link(), w);
  const double t_cpu = device_time(cpu, cpu.max_threads(), w.parallel_flops, 0.0, true);
  const double t_phi = device_time(phi, phi.max_threads(), w.parallel_flops, 0.0, true);
  const double s = est.symmetric_cpu_share;
  CHECK(s * t_cpu == doctest::Approx((1.0 - s) * t_phi).epsilon(1e-12));
  // with the compute roof binding, the share reduces to the rate ratio
  const double cpu_rate = w.parallel_flops / t_cpu;
  const double phi_rate = w.parallel_flops / t_phi;
  CHECK(s == doctest::Approx(cpu_rate / (cpu_rate + phi_rate)).epsilon(1e-12));
}

TEST_CASE("recommendation is the argmin of supported estimates") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    PlatformModel cpu = default_cpu();
    PlatformModel phi = default_coprocessor();
    cpu.scalar_flops_per_thread = 1e9 * (1 + rng() % 10);
    phi.scalar_flops_per_thread = 1e9 * (1 + rng() % 10);
    Workload w;
    w.serial_flops = 1e10 * static_cast<double>(rng() % 100);
    w.parallel_flops = 1e10 * static_cast<double>(rng() % 100);
    w.bytes_touched = 1e8 * static_cast<double>(rng() % 100);
    w.transfer_bytes = 1e8 * static_cast<double>(rng() % 100);
    w.comm_bytes = 1e8 * static_cast<double>(rng() % 100);
    w.bitwise_copyable = rng() % 2 == 0;
    const ModeEstimate est = estimate_modes(cpu, phi, default_link(), w);
    double best = 1e300;
    if (est.offload_s) best = std::min(best, *est.offload_s);
    best = std::min(best, *est.symmetric_s);
    best = std::min(best, *est.native_s);
    switch (est.recommended) {
      case ExecMode::Offload: REQUIRE(*est.offload_s == best); break;
      case ExecMode::Symmetric: REQUIRE(*est.symmetric_s == best); break;
      case ExecMode::Native: REQUIRE(*est.native_s == best); break;
    }
  }
}

TEST_CASE("recommendation is invariant under uniform scaling") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 100; ++trial) {
    PlatformModel cpu = default_cpu();
    PlatformModel phi = default_coprocessor();
    PcieLink link = default_link();
    Workload w;
    w.serial_flops = 1e10 * static_cast<double>(rng() % 50);
    w.parallel_flops = 1e10 * static_cast<double>(rng() % 50);
    w.bytes_touched = 1e8 * static_cast<double>(rng() % 50);
    w.transfer_bytes = 1e8 * static_cast<double>(rng() % 50);
    w.comm_bytes = 1e8 * static_cast<double>(rng() % 50);
    const ExecMode base = estimate_modes(cpu, phi, link, w).recommended;
    for (double c : {0.5, 3.0, 10.0}) {
      PlatformModel cpu_c = cpu, phi_c = phi;
      PcieLink link_c = link;
      Workload w_c = w;
      for (PlatformModel* m : {&cpu_c, &phi_c}) {
        m->peak_flops *= c;
        m->mem_bandwidth *= c;
        m->scalar_flops_per_thread *= c;
      }
      link_c.bandwidth *= c;
      w_c.serial_flops *= c;
      w_c.parallel_flops *= c;
      w_c.bytes_touched *= c;
      w_c.transfer_bytes *= c;
      w_c.comm_bytes *= c;
      CHECK(estimate_modes(cpu_c, phi_c, link_c, w_c).recommended == base);
    }
  }
}

TEST_CASE("crossover examples") {
  // identical devices are never strictly faster
  CHECK_FALSE(crossover_threads(default_cpu(), default_cpu(), Workload{.parallel_flops = 1e12})
                  .has_value());

  // hand-derived fixture: beat a 160 Gflop/s host with 2 Gflop/s threads
  Workload compute;
  compute.parallel_flops = 1e12;
  const auto t = crossover_threads(crossover_phi(), crossover_cpu(), compute);
  REQUIRE(t.has_value());
  CHECK(*t == 81);

  // memory-bound: the roofs compare independent of threads
  PlatformModel wide = crossover_phi();
  wide.mem_bandwidth = 350e9;
  Workload memory;
  memory.parallel_flops = 1.0;
  memory.bytes_touched = 1e12;
  const auto t1 = crossover_threads(wide, crossover_cpu(), memory);
  REQUIRE(t1.has_value());
  CHECK(*t1 == 1);
}

TEST_CASE("crossover search stays within the device thread budget") {
  PlatformModel strong_cpu = crossover_cpu();
  strong_cpu.peak_flops = 1e15;
  strong_cpu.scalar_flops_per_thread = 1e13;
  Workload w;
  w.parallel_flops = 1e12;
  CHECK_FALSE(crossover_threads(crossover_phi(), strong_cpu, w).has_value());
}

TEST_CASE("model files parse, override and reject junk") {
  const auto phi_path = temp_path("phi.model");
  write_file(phi_path,
             "# coprocessor fixture\n"
             "name = phi-fixture\n"
             "cores = 61\n"
             "threads_per_core = 4\n"
             "scalar_flops_per_thread = 2e9\n"
             "peak_flops = 162e9\n"
             "mem_bandwidth = 100e9\n");
  const PlatformModel phi = platform_from_file(phi_path.string(), default_coprocessor());
  CHECK(phi.name == "phi-fixture");
  CHECK(phi.peak_flops == 162e9);
  CHECK(phi.scalar_flops_per_thread == 2e9);

  const auto partial = temp_path("partial.model");
  write_file(partial, "cores = 10\n");
  const PlatformModel merged = platform_from_file(partial.string(), default_coprocessor());
  CHECK(merged.cores == 10);
  CHECK(merged.peak_flops == 1.065e12);  // untouched default

  const auto w_path = temp_path("workload.model");
  write_file(w_path,
             "serial_flops = 1e9\nparallel_flops = 2e12\nbytes_touched = 1e10\n"
             "transfer_bytes = 5e8\ncomm_bytes = 0\nbitwise_copyable = false\n");
  const Workload w = workload_from_file(w_path.string());
  CHECK(w.parallel_flops == 2e12);
  CHECK_FALSE(w.bitwise_copyable);

  const auto link_path = temp_path("link.model");
  write_file(link_path, "bandwidth = 16e9\nlatency = 2e-6\n");
  const PcieLink link = link_from_file(link_path.string());
  CHECK(link.bandwidth == 16e9);
  CHECK(link.latency == 2e-6);

  const auto bad = temp_path("bad.model");
  write_file(bad, "frequency = 1.0\n");
  CHECK_THROWS_AS(platform_from_file(bad.string(), default_cpu()), ParseError);
  write_file(bad, "cores\n");
  CHECK_THROWS_AS(platform_from_file(bad.string(), default_cpu()), ParseError);
  write_file(bad, "cores = twelve\n");
  CHECK_THROWS_AS(platform_from_file(bad.string(), default_cpu()), ParseError);
  write_file(bad, "cores = 0\n");
  CHECK_THROWS_AS(platform_from_file(bad.string(), default_cpu()), ParseError);
  write_file(bad, "serial_flops = -1\n");
  CHECK_THROWS_AS(workload_from_file(bad.string()), ParseError);
  CHECK_THROWS_AS(link_from_file(temp_path("absent.model").string()), IoError);
}
