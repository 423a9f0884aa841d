#include "cgbench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cgbench/cg.hpp"
#include "cgbench/errors.hpp"
#include "cgbench/parallel.hpp"

namespace cgbench {

const char* to_string(BenchKernel kernel) {
  switch (kernel) {
    case BenchKernel::Saxpy: return "saxpy";
    case BenchKernel::Dot: return "dot";
    case BenchKernel::Spmv: return "spmv";
    case BenchKernel::Cg: return "cg";
  }
  return "?";
}

const char* to_string(KernelVariant variant) {
  return variant == KernelVariant::Scalar ? "scalar" : "vectorized";
}

BenchKernel bench_kernel_from_string(const std::string& name) {
  if (name == "saxpy") return BenchKernel::Saxpy;
  if (name == "dot") return BenchKernel::Dot;
  if (name == "spmv") return BenchKernel::Spmv;
  if (name == "cg") return BenchKernel::Cg;
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

KernelVariant variant_from_string(const std::string& name) {
  if (name == "scalar") return KernelVariant::Scalar;
  if (name == "vectorized") return KernelVariant::Vectorized;
  throw std::invalid_argument("unknown variant '" + name + "'");
}

BenchmarkRecord finalize_record(BenchKernel kernel, index_t n,
                                std::optional<index_t> nnz, int threads,
                                KernelVariant variant, int reps, double elapsed_s,
                                double flops_per_rep, double bytes_per_rep,
                                double checksum) {
  BenchmarkRecord rec;
  rec.kernel = to_string(kernel);
  rec.n = n;
  rec.nnz = nnz;
  rec.threads = threads;
  rec.variant = variant;
  rec.reps = reps;
  rec.elapsed_s = elapsed_s;
  rec.gflops = flops_per_rep / elapsed_s / 1e9;
  rec.speedup = 1.0;
  rec.checksum = checksum;
  rec.flops_per_rep = flops_per_rep;
  rec.bytes_per_rep = bytes_per_rep;
  rec.bytes_per_sec = bytes_per_rep / elapsed_s;
  return rec;
}

void require_checksum(const std::string& kernel, double actual, double reference) {
  const double scale = std::max(std::abs(reference), 1e-300);
  if (!(std::abs(actual - reference) <= 1e-10 * scale)) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "%s: checksum %.17g disagrees with scalar reference %.17g",
                  kernel.c_str(), actual, reference);
    throw ChecksumError(msg);
  }
}

namespace {

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sum_scalar(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

// Lower median of the per-repetition timings.
double median_time(std::vector<double> times) {
  std::sort(times.begin(), times.end());
  return times[(times.size() - 1) / 2];
}

class Stopwatch {
 public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  double stop() const {
    const auto dt = std::chrono::steady_clock::now() - t0_;
    // Nanosecond floor keeps elapsed (and thus gflops) strictly positive for
    // runs below the clock granularity.
    return std::max(std::chrono::duration<double>(dt).count(), 1e-9);
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

struct RunOutcome {
  KernelStats stats;  // flops/bytes of one repetition; elapsed filled by the timer
  double checksum = 0.0;
  index_t n = 0;
  std::optional<index_t> nnz;
};

class KernelRun {
 public:
  KernelRun(const BenchSpec& spec) : spec_(spec) {
    std::mt19937_64 rng(spec.seed);
    switch (spec.kernel) {
      case BenchKernel::Saxpy:
      case BenchKernel::Dot: {
        x_.resize(static_cast<std::size_t>(spec.n));
        y_.resize(static_cast<std::size_t>(spec.n));
        z_.resize(static_cast<std::size_t>(spec.n));
        for (auto& v : x_) v = next_unit(rng);
        for (auto& v : y_) v = next_unit(rng);
        break;
      }
      case BenchKernel::Spmv: {
        matrix_ = gen_stencil(spec.stencil);
        x_.resize(static_cast<std::size_t>(matrix_.ncols));
        z_.resize(static_cast<std::size_t>(matrix_.nrows));
        for (auto& v : x_) v = next_unit(rng);
        break;
      }
      case BenchKernel::Cg: {
        matrix_ = gen_stencil(spec.stencil);
        rhs_ = DenseVector(matrix_.nrows, 1.0);
        break;
      }
    }
  }

  // Executes the kernel once under (variant, threads) and returns its
  // accounting and checksum. Checksums are serial scalar sums so they do not
  // depend on the configuration being measured.
  RunOutcome run(KernelVariant variant, int threads) {
    RunOutcome out;
    switch (spec_.kernel) {
      case BenchKernel::Saxpy: {
        const Partition p = partition_rows(spec_.n, threads);
        parallel_apply(p, [&](IndexRange r) {
          saxpy_core(kSaxpyA, x_.data() + r.begin, y_.data() + r.begin,
                     z_.data() + r.begin, r.size(), variant);
        });
        out.checksum = sum_scalar(z_);
        out.stats.flops = saxpy_flops(spec_.n);
        out.stats.bytes_moved = saxpy_bytes(spec_.n);
        out.n = spec_.n;
        break;
      }
      case BenchKernel::Dot: {
        const Partition p = partition_rows(spec_.n, threads);
        out.checksum = parallel_reduce(
            p,
            [&](IndexRange r) {
              return dot_core(x_.data() + r.begin, y_.data() + r.begin, r.size(),
                              variant);
            },
            [](double acc, double part) { return acc + part; });
        out.stats.flops = dot_flops(spec_.n);
        out.stats.bytes_moved = dot_bytes(spec_.n);
        out.n = spec_.n;
        break;
      }
      case BenchKernel::Spmv: {
        const Partition p = partition_rows(matrix_.nrows, threads);
        parallel_apply(p, [&](IndexRange r) {
          for (index_t i = r.begin; i < r.end; ++i) {
            z_[static_cast<std::size_t>(i)] = spmv_row(matrix_, x_.data(), i, variant);
          }
        });
        out.checksum = sum_scalar(z_);
        out.stats.flops = spmv_flops(matrix_.nnz());
        out.stats.bytes_moved = spmv_traffic(matrix_);
        out.n = matrix_.nrows;
        out.nnz = matrix_.nnz();
        break;
      }
      case BenchKernel::Cg: {
        CgConfig cfg;
        cfg.tol = spec_.cg_tol;
        const ExecContext ctx{variant, threads};
        const CgResult res = cg_solve(CsrOperator(matrix_, ctx), rhs_, cfg, ctx);
        if (!res.converged) {
          throw std::runtime_error("cg benchmark did not converge; raise cg_tol");
        }
        out.checksum = sum_scalar(res.x.values());
        out.stats.flops = static_cast<double>(
            flops_per_cg_iteration(matrix_.nrows, matrix_.nnz()) * res.iterations);
        out.stats.bytes_moved =
            static_cast<double>(res.iterations) * spmv_traffic(matrix_);
        out.n = matrix_.nrows;
        out.nnz = matrix_.nnz();
        break;
      }
    }
    return out;
  }

 private:
  static constexpr double kSaxpyA = 1.5;

  // Cold-cache traffic of one SpMV pass: values and column indices once,
  // row offsets once, x and y once.
  static double spmv_traffic(const CsrMatrix& a) {
    return 16.0 * static_cast<double>(a.nnz()) +
           8.0 * static_cast<double>(a.nrows + 1) +
           8.0 * static_cast<double>(a.ncols) + 8.0 * static_cast<double>(a.nrows);
  }

  BenchSpec spec_;
  std::vector<double> x_, y_, z_;
  CsrMatrix matrix_;
  DenseVector rhs_;
};

void validate_spec(const BenchSpec& spec) {
  if (spec.reps < 1) throw std::invalid_argument("bench: reps must be >= 1");
  if (spec.threads < 1) throw std::invalid_argument("bench: threads must be >= 1");
  if ((spec.kernel == BenchKernel::Saxpy || spec.kernel == BenchKernel::Dot) &&
      spec.n < 1) {
    throw std::invalid_argument("bench: n must be >= 1");
  }
}

}  // namespace

BenchmarkRecord bench_kernel(const BenchSpec& spec) {
  validate_spec(spec);
  KernelRun run(spec);

  const RunOutcome reference = run.run(KernelVariant::Scalar, 1);
  const bool is_reference_config =
      spec.variant == KernelVariant::Scalar && spec.threads == 1;
  if (!is_reference_config) {
    run.run(spec.variant, spec.threads);  // warm-up of the measured config
  }

  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(spec.reps));
  RunOutcome out;
  Stopwatch sw;
  for (int rep = 0; rep < spec.reps; ++rep) {
    sw.start();
    out = run.run(spec.variant, spec.threads);
    times.push_back(sw.stop());
  }
  out.stats.elapsed = median_time(std::move(times));
  require_checksum(to_string(spec.kernel), out.checksum, reference.checksum);

  return finalize_record(spec.kernel, out.n, out.nnz, spec.threads, spec.variant,
                         spec.reps, out.stats.elapsed, out.stats.flops,
                         out.stats.bytes_moved, out.checksum);
}

std::vector<BenchmarkRecord> sweep_threads(const BenchSpec& base,
                                           const std::vector<int>& thread_list,
                                           const std::vector<KernelVariant>& variants) {
  if (thread_list.empty()) throw std::invalid_argument("sweep: empty thread list");
  if (variants.empty()) throw std::invalid_argument("sweep: empty variant list");
  for (std::size_t i = 1; i < thread_list.size(); ++i) {
    if (thread_list[i] <= thread_list[i - 1]) {
      throw std::invalid_argument("sweep: thread list must be strictly ascending");
    }
  }

  std::vector<BenchmarkRecord> records;
  records.reserve(thread_list.size() * variants.size());
  std::optional<double> baseline;
  for (int threads : thread_list) {
    for (KernelVariant variant : variants) {
      BenchSpec spec = base;
      spec.threads = threads;
      spec.variant = variant;
      records.push_back(bench_kernel(spec));
      if (threads == 1 && variant == KernelVariant::Scalar) {
        baseline = records.back().elapsed_s;
      }
    }
  }
  if (!baseline) {
    BenchSpec spec = base;
    spec.threads = 1;
    spec.variant = KernelVariant::Scalar;
    baseline = bench_kernel(spec).elapsed_s;
  }
  for (BenchmarkRecord& rec : records) rec.speedup = *baseline / rec.elapsed_s;
  return records;
}

namespace {

constexpr const char* kCsvHeader =
    "kernel,n,nnz,threads,variant,reps,elapsed_s,gflops,speedup,checksum";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string records_to_csv(const std::vector<BenchmarkRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const BenchmarkRecord& r : records) {
    out << r.kernel << "," << r.n << ",";
    if (r.nnz) out << *r.nnz;
    out << "," << r.threads << "," << to_string(r.variant) << "," << r.reps << ","
        << fmt17(r.elapsed_s) << "," << fmt17(r.gflops) << "," << fmt17(r.speedup)
        << "," << fmt17(r.checksum) << "\n";
  }
  return out.str();
}

std::vector<BenchmarkRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("records_from_csv: missing or unexpected header");
  }
  std::vector<BenchmarkRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 10) {
      throw ParseError("records_from_csv: expected 10 fields, got " +
                       std::to_string(fields.size()));
    }
    BenchmarkRecord r;
    r.kernel = fields[0];
    r.n = std::stoll(fields[1]);
    if (!fields[2].empty()) r.nnz = std::stoll(fields[2]);
    r.threads = std::stoi(fields[3]);
    r.variant = variant_from_string(fields[4]);
    r.reps = std::stoi(fields[5]);
    r.elapsed_s = std::stod(fields[6]);
    r.gflops = std::stod(fields[7]);
    r.speedup = std::stod(fields[8]);
    r.checksum = std::stod(fields[9]);
    records.push_back(std::move(r));
  }
  return records;
}

void write_records_csv(const std::vector<BenchmarkRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << records_to_csv(records);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<BenchmarkRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return records_from_csv(buf.str());
}

std::string records_to_json(const std::vector<BenchmarkRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BenchmarkRecord& r : records) {
    nlohmann::json obj{
        {"kernel", r.kernel},       {"n", r.n},
        {"threads", r.threads},     {"variant", to_string(r.variant)},
        {"reps", r.reps},           {"elapsed_s", r.elapsed_s},
        {"gflops", r.gflops},       {"speedup", r.speedup},
        {"checksum", r.checksum},
    };
    if (r.nnz) {
      obj["nnz"] = *r.nnz;
    } else {
      obj["nnz"] = nullptr;
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void write_records_json(const std::vector<BenchmarkRecord>& records,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << records_to_json(records);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace cgbench
