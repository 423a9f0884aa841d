#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgbench/generators.hpp"
#include "cgbench/kernels.hpp"

namespace cgbench {

// Timed kernel measurements. Every benchmark first runs the serial scalar
// reference to obtain a correctness checksum, then one untimed warm-up of
// the requested configuration, then `reps` timed repetitions of which the
// (lower) median is reported. A run whose checksum disagrees with the
// reference aborts instead of reporting a fast wrong answer.

enum class BenchKernel { Saxpy, Dot, Spmv, Cg };

const char* to_string(BenchKernel kernel);
const char* to_string(KernelVariant variant);
BenchKernel bench_kernel_from_string(const std::string& name);
KernelVariant variant_from_string(const std::string& name);

struct BenchSpec {
  BenchKernel kernel = BenchKernel::Saxpy;
  index_t n = 1'000'000;                // vector length (saxpy, dot)
  StencilSpec stencil{16, 16, 16};      // system source (spmv, cg)
  int threads = 1;
  KernelVariant variant = KernelVariant::Vectorized;
  int reps = 5;
  std::uint64_t seed = 12345;
  // Absolute residual target for the cg kernel; tight enough that the
  // solution checksum tracks the serial reference configuration.
  double cg_tol = 1e-11;
};

struct BenchmarkRecord {
  std::string kernel;
  index_t n = 0;
  std::optional<index_t> nnz;  // matrix kernels only
  int threads = 1;
  KernelVariant variant = KernelVariant::Scalar;
  int reps = 1;
  double elapsed_s = 0.0;  // median timed repetition
  double gflops = 0.0;
  double speedup = 1.0;    // vs (threads=1, Scalar); 1.0 for a lone bench
  double checksum = 0.0;
  // Derived accounting, not serialized.
  double flops_per_rep = 0.0;
  double bytes_per_rep = 0.0;
  double bytes_per_sec = 0.0;
};

// Pure record assembly: gflops = flops_per_rep / elapsed_s / 1e9 and
// bytes_per_sec = bytes_per_rep / elapsed_s, by construction.
BenchmarkRecord finalize_record(BenchKernel kernel, index_t n,
                                std::optional<index_t> nnz, int threads,
                                KernelVariant variant, int reps, double elapsed_s,
                                double flops_per_rep, double bytes_per_rep,
                                double checksum);

// Throws ChecksumError unless actual agrees with reference to 1e-10 relative.
void require_checksum(const std::string& kernel, double actual, double reference);

BenchmarkRecord bench_kernel(const BenchSpec& spec);

// One record per (threads, variant) pair, threads outer, with speedup taken
// against the (threads=1, Scalar) configuration; when that pair is not part
// of the sweep it is measured separately as a baseline and not emitted.
std::vector<BenchmarkRecord> sweep_threads(const BenchSpec& base,
                                           const std::vector<int>& thread_list,
                                           const std::vector<KernelVariant>& variants);

// CSV columns: kernel,n,nnz,threads,variant,reps,elapsed_s,gflops,speedup,
// checksum. Numbers carry 17 significant digits so parsing reproduces the
// records exactly; nnz is empty for vector kernels.
std::string records_to_csv(const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> records_from_csv(const std::string& text);
void write_records_csv(const std::vector<BenchmarkRecord>& records,
                       const std::string& path);
std::vector<BenchmarkRecord> read_records_csv(const std::string& path);

// JSON mirror with the same fields.
std::string records_to_json(const std::vector<BenchmarkRecord>& records);
void write_records_json(const std::vector<BenchmarkRecord>& records,
                        const std::string& path);

}  // namespace cgbench
