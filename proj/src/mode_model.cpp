#include "cgbench/mode_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cgbench/errors.hpp"

namespace cgbench {

void PlatformModel::validate() const {
  if (cores < 1 || threads_per_core < 1) {
    throw std::invalid_argument("platform '" + name + "': cores and threads_per_core must be >= 1");
  }
  if (!(peak_flops > 0.0) || !(mem_bandwidth > 0.0) || !(scalar_flops_per_thread > 0.0)) {
    throw std::invalid_argument("platform '" + name + "': rates must be > 0");
  }
}

void Workload::validate() const {
  if (serial_flops < 0 || parallel_flops < 0 || bytes_touched < 0 ||
      transfer_bytes < 0 || comm_bytes < 0) {
    throw std::invalid_argument("workload: counts must be >= 0");
  }
}

void PcieLink::validate() const {
  if (!(bandwidth > 0.0) || latency < 0.0) {
    throw std::invalid_argument("link: bandwidth must be > 0 and latency >= 0");
  }
}

const char* to_string(ExecMode mode) {
  switch (mode) {
    case ExecMode::Offload: return "offload";
    case ExecMode::Symmetric: return "symmetric";
    case ExecMode::Native: return "native";
  }
  return "?";
}

double device_time(const PlatformModel& model, int threads, double flops,
                   double bytes, bool vectorized) {
  model.validate();
  if (threads < 1) throw std::invalid_argument("device_time: threads must be >= 1");
  const double lanes = vectorized ? kModelVectorLanes : 1.0;
  const double rate =
      std::min(static_cast<double>(threads) * model.scalar_flops_per_thread * lanes,
               model.peak_flops);
  const double compute_s = flops > 0.0 ? flops / rate : 0.0;
  const double memory_s = bytes > 0.0 ? bytes / model.mem_bandwidth : 0.0;
  return std::max(compute_s, memory_s);
}

ModeEstimate estimate_modes(const PlatformModel& cpu, const PlatformModel& phi,
                            const PcieLink& link, const Workload& w,
                            int transfers) {
  cpu.validate();
  phi.validate();
  link.validate();
  w.validate();
  if (transfers < 1) throw std::invalid_argument("estimate_modes: transfers must be >= 1");

  const double serial_on_cpu = w.serial_flops / cpu.scalar_flops_per_thread;
  const double serial_on_phi = w.serial_flops / phi.scalar_flops_per_thread;
  const double par_cpu =
      device_time(cpu, cpu.max_threads(), w.parallel_flops, w.bytes_touched, true);
  const double par_phi =
      device_time(phi, phi.max_threads(), w.parallel_flops, w.bytes_touched, true);
  const auto link_time = [&](double bytes, int trips) {
    return bytes > 0.0 ? trips * (link.latency + bytes / link.bandwidth) : 0.0;
  };

  ModeEstimate est;
  if (w.bitwise_copyable) {
    est.offload_s = serial_on_cpu + link_time(w.transfer_bytes, transfers) + par_phi;
  }
  est.native_s = serial_on_phi + par_phi;

  // Optimal static split: each device gets the share that equalizes finish
  // times, so the combined time is the harmonic combination of the two
  // full-work times.
  const double par_total = par_cpu + par_phi;
  const double combined = par_total > 0.0 ? par_cpu * par_phi / par_total : 0.0;
  est.symmetric_cpu_share = par_total > 0.0 ? par_phi / par_total : 0.0;
  est.symmetric_s = serial_on_cpu + combined + link_time(w.comm_bytes, 1);

  const std::pair<ExecMode, std::optional<double>> candidates[] = {
      {ExecMode::Offload, est.offload_s},
      {ExecMode::Symmetric, est.symmetric_s},
      {ExecMode::Native, est.native_s},
  };
  bool have = false;
  double best = 0.0;
  for (const auto& [mode, t] : candidates) {
    if (!t) continue;
    if (!have || *t < best) {
      have = true;
      best = *t;
      est.recommended = mode;
    }
  }
  return est;
}

std::optional<int> crossover_threads(const PlatformModel& phi,
                                     const PlatformModel& cpu, const Workload& w,
                                     bool vectorized) {
  w.validate();
  const double cpu_time = device_time(cpu, cpu.max_threads(), w.parallel_flops,
                                      w.bytes_touched, vectorized);
  for (int t = 1; t <= phi.max_threads(); ++t) {
    if (device_time(phi, t, w.parallel_flops, w.bytes_touched, vectorized) < cpu_time) {
      return t;
    }
  }
  return std::nullopt;
}

PlatformModel default_coprocessor() {
  PlatformModel m;
  m.name = "phi-5100";
  m.cores = 61;
  m.threads_per_core = 4;
  m.peak_flops = 1.065e12;   // double-precision peak
  m.mem_bandwidth = 352e9;   // GDDR5 peak
  m.scalar_flops_per_thread = 2.182e9;  // fused mul-add per cycle at 1.091 GHz
  return m;
}

PlatformModel default_cpu() {
  // Two 8-core sockets; ballpark figures, not a datasheet.
  PlatformModel m;
  m.name = "xeon-2x8";
  m.cores = 16;
  m.threads_per_core = 1;
  m.peak_flops = 332.8e9;
  m.mem_bandwidth = 102.4e9;
  m.scalar_flops_per_thread = 5.2e9;
  return m;
}

PcieLink default_link() {
  return PcieLink{8e9, 1e-6};
}

namespace {

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw ParseError(path + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

double to_double(const std::string& path, const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError(path + ": key '" + key + "': bad number '" + v + "'");
  }
}

int to_int(const std::string& path, const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ParseError(path + ": key '" + key + "': bad integer '" + v + "'");
  }
}

bool to_bool(const std::string& path, const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ParseError(path + ": key '" + key + "': bad boolean '" + v + "'");
}

}  // namespace

PlatformModel platform_from_file(const std::string& path, PlatformModel base) {
  for (const auto& [key, value] : parse_kv_file(path)) {
    if (key == "name") base.name = value;
    else if (key == "cores") base.cores = to_int(path, key, value);
    else if (key == "threads_per_core") base.threads_per_core = to_int(path, key, value);
    else if (key == "peak_flops") base.peak_flops = to_double(path, key, value);
    else if (key == "mem_bandwidth") base.mem_bandwidth = to_double(path, key, value);
    else if (key == "scalar_flops_per_thread") base.scalar_flops_per_thread = to_double(path, key, value);
    else throw ParseError(path + ": unknown platform key '" + key + "'");
  }
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
  return base;
}

Workload workload_from_file(const std::string& path) {
  Workload w;
  for (const auto& [key, value] : parse_kv_file(path)) {
    if (key == "serial_flops") w.serial_flops = to_double(path, key, value);
    else if (key == "parallel_flops") w.parallel_flops = to_double(path, key, value);
    else if (key == "bytes_touched") w.bytes_touched = to_double(path, key, value);
    else if (key == "transfer_bytes") w.transfer_bytes = to_double(path, key, value);
    else if (key == "comm_bytes") w.comm_bytes = to_double(path, key, value);
    else if (key == "bitwise_copyable") w.bitwise_copyable = to_bool(path, key, value);
    else throw ParseError(path + ": unknown workload key '" + key + "'");
  }
  try {
    w.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
  return w;
}

PcieLink link_from_file(const std::string& path) {
  PcieLink link = default_link();
  for (const auto& [key, value] : parse_kv_file(path)) {
    if (key == "bandwidth") link.bandwidth = to_double(path, key, value);
    else if (key == "latency") link.latency = to_double(path, key, value);
    else throw ParseError(path + ": unknown link key '" + key + "'");
  }
  try {
    link.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
  return link;
}

}  // namespace cgbench
