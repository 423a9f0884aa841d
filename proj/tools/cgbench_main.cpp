#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgbench/bench.hpp"
#include "cgbench/cg.hpp"
#include "cgbench/csr_matrix.hpp"
#include "cgbench/errors.hpp"
#include "cgbench/generators.hpp"
#include "cgbench/matrix_market.hpp"
#include "cgbench/mode_model.hpp"

namespace {

using namespace cgbench;

// Stable exit code contract.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitNotSpd = 4;
constexpr int kExitChecksum = 5;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

int usage_error(const std::string& msg) {
  std::cerr << "usage error: " << msg << "\n";
  return kExitUsage;
}

struct GenArgs {
  std::vector<index_t> stencil;
  index_t random_n = 0;
  std::uint64_t seed = 42;
  std::string out;
};

int run_gen(const GenArgs& args) {
  if (args.stencil.empty() == (args.random_n == 0)) {
    return usage_error("gen needs exactly one of --stencil or --random");
  }
  CsrMatrix a;
  try {
    a = args.stencil.empty()
            ? gen_random_spd(args.random_n, args.seed)
            : gen_stencil({args.stencil[0], args.stencil[1], args.stencil[2]});
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }
  try {
    mm_write(a, args.out);
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  std::cout << "gen n=" << a.nrows << " nnz=" << a.nnz() << " out=" << args.out << "\n";
  return kExitOk;
}

struct SolveArgs {
  std::string matrix;
  std::vector<index_t> stencil;
  std::string rhs = "ones";
  double tol = 1e-8;
  bool relative = false;
  index_t max_iters = 0;
  int threads = default_threads();
  std::string variant = "vectorized";
  std::string precond = "none";
  bool normal_eq = false;
  bool json = false;
};

int run_solve(const SolveArgs& args) {
  if (args.matrix.empty() == args.stencil.empty()) {
    return usage_error("solve needs exactly one of --matrix or --stencil");
  }
  if (args.threads < 1) return usage_error("--threads must be >= 1");
  if (!(args.tol > 0)) return usage_error("--tol must be > 0");
  if (args.normal_eq && args.precond != "none") {
    return usage_error("--normal-eq cannot be combined with --precond");
  }

  ExecContext ctx;
  ctx.threads = args.threads;
  CgConfig cfg;
  cfg.tol = args.tol;
  cfg.relative_tol = args.relative;
  cfg.max_iters = args.max_iters;
  try {
    ctx.variant = variant_from_string(args.variant);
    if (args.precond == "jacobi") {
      cfg.preconditioner = Preconditioner::Jacobi;
    } else if (args.precond != "none") {
      throw std::invalid_argument("unknown preconditioner '" + args.precond + "'");
    }
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }

  CsrMatrix a;
  DenseVector b;
  try {
    a = args.matrix.empty()
            ? gen_stencil({args.stencil[0], args.stencil[1], args.stencil[2]})
            : mm_read(args.matrix);
    if (!args.normal_eq && a.nrows != a.ncols) {
      return usage_error("matrix is not square; pass --normal-eq to solve A'Ax = A'b");
    }
    if (args.normal_eq && a.nrows < a.ncols) {
      return usage_error("--normal-eq needs nrows >= ncols");
    }
    b = args.rhs == "ones" ? DenseVector(a.nrows, 1.0) : read_vector(args.rhs, a.nrows);
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }

  CgResult res;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (args.normal_eq) {
      auto [op, rhs] = normal_equations(a, b, ctx);
      res = cg_solve(*op, rhs, cfg, ctx);
    } else {
      res = pcg_solve(a, b, cfg, ctx);  // None delegates to plain cg
    }
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "NotPositiveDefinite: " << e.what() << "\n";
    return kExitNotSpd;
  } catch (const DimensionError& e) {
    return usage_error(e.what());
  }
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // Recomputed from scratch with the serial scalar path; guards against
  // recurrence drift.
  const DenseVector ax = spmv(a, res.x, KernelVariant::Scalar);
  double true_resid_sq = 0.0;
  for (index_t i = 0; i < b.size(); ++i) {
    const double d = b[i] - ax[i];
    true_resid_sq += d * d;
  }
  const double true_residual = std::sqrt(true_resid_sq);
  double x_checksum = 0.0;
  for (double v : res.x) x_checksum += v;

  if (args.json) {
    nlohmann::json doc{
        {"command", "solve"},
        {"n", a.ncols},
        {"nnz", a.nnz()},
        {"tol", args.tol},
        {"tol_mode", args.relative ? "rel" : "abs"},
        {"precond", args.precond},
        {"normal_eq", args.normal_eq},
        {"threads", args.threads},
        {"variant", args.variant},
        {"converged", res.converged},
        {"iterations", res.iterations},
        {"residual", res.residual_history.back()},
        {"true_residual", true_residual},
        {"x_checksum", x_checksum},
        {"counters",
         {{"spmv", res.counters.spmv},
          {"dot", res.counters.dot},
          {"saxpy", res.counters.saxpy}}},
        {"wall_s", wall_s},
    };
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "solve converged=" << (res.converged ? 1 : 0)
              << " iterations=" << res.iterations
              << " residual=" << fmt17(res.residual_history.back())
              << " true_residual=" << fmt17(true_residual)
              << " x_checksum=" << fmt17(x_checksum) << " n=" << a.ncols
              << " nnz=" << a.nnz() << " spmv=" << res.counters.spmv
              << " dot=" << res.counters.dot << " saxpy=" << res.counters.saxpy
              << " threads=" << args.threads << " variant=" << args.variant
              << " wall_s=" << fmt_g(wall_s) << "\n";
  }
  return res.converged ? kExitOk : kExitNotConverged;
}

struct BenchArgs {
  std::string kernel;
  index_t n = 1'000'000;
  std::vector<index_t> stencil = {16, 16, 16};
  int threads = default_threads();
  std::string variant = "vectorized";
  std::vector<int> thread_list = {1, 2, 4};
  std::vector<std::string> variants = {"scalar", "vectorized"};
  int reps = 5;
  std::uint64_t seed = 12345;
  std::string out;
  std::string json_out;
};

int emit_records(const std::vector<BenchmarkRecord>& records, const BenchArgs& args) {
  std::cout << records_to_csv(records);
  try {
    if (!args.out.empty()) write_records_csv(records, args.out);
    if (!args.json_out.empty()) write_records_json(records, args.json_out);
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int run_bench(const BenchArgs& args, bool sweep) {
  BenchSpec spec;
  try {
    spec.kernel = bench_kernel_from_string(args.kernel);
    spec.n = args.n;
    if (args.stencil.size() != 3) return usage_error("--stencil needs nx ny nz");
    spec.stencil = {args.stencil[0], args.stencil[1], args.stencil[2]};
    spec.reps = args.reps;
    spec.seed = args.seed;
    if (spec.reps < 1) return usage_error("--reps must be >= 1");

    std::vector<BenchmarkRecord> records;
    if (sweep) {
      std::vector<KernelVariant> variants;
      for (const std::string& name : args.variants) {
        variants.push_back(variant_from_string(name));
      }
      records = sweep_threads(spec, args.thread_list, variants);
    } else {
      spec.threads = args.threads;
      spec.variant = variant_from_string(args.variant);
      records.push_back(bench_kernel(spec));
    }
    return emit_records(records, args);
  } catch (const ChecksumError& e) {
    std::cerr << "checksum failure: " << e.what() << "\n";
    return kExitChecksum;
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }
}

struct AdviseArgs {
  std::string workload;
  std::string phi;
  std::string cpu;
  std::string link;
  int transfers = 1;
};

int run_advise(const AdviseArgs& args) {
  PlatformModel cpu = default_cpu();
  PlatformModel phi = default_coprocessor();
  PcieLink link = default_link();
  Workload w;
  try {
    if (!args.cpu.empty()) cpu = platform_from_file(args.cpu, cpu);
    if (!args.phi.empty()) phi = platform_from_file(args.phi, phi);
    if (!args.link.empty()) link = link_from_file(args.link);
    if (!args.workload.empty()) w = workload_from_file(args.workload);
    if (args.transfers < 1) return usage_error("--transfers must be >= 1");

    const ModeEstimate est = estimate_modes(cpu, phi, link, w, args.transfers);
    const std::optional<int> crossover = crossover_threads(phi, cpu, w);

    const auto echo_platform = [](const char* tag, const PlatformModel& m) {
      std::cout << tag << " name=" << m.name << " cores=" << m.cores
                << " threads_per_core=" << m.threads_per_core
                << " scalar_flops_per_thread=" << fmt_g(m.scalar_flops_per_thread)
                << " peak_flops=" << fmt_g(m.peak_flops)
                << " mem_bandwidth=" << fmt_g(m.mem_bandwidth) << "\n";
    };
    echo_platform("cpu", cpu);
    echo_platform("phi", phi);
    std::cout << "link bandwidth=" << fmt_g(link.bandwidth)
              << " latency=" << fmt_g(link.latency) << " transfers=" << args.transfers
              << "\n";
    std::cout << "workload serial_flops=" << fmt_g(w.serial_flops)
              << " parallel_flops=" << fmt_g(w.parallel_flops)
              << " bytes_touched=" << fmt_g(w.bytes_touched)
              << " transfer_bytes=" << fmt_g(w.transfer_bytes)
              << " comm_bytes=" << fmt_g(w.comm_bytes)
              << " bitwise_copyable=" << (w.bitwise_copyable ? 1 : 0) << "\n";
    const auto mode_field = [](const std::optional<double>& t) {
      return t ? fmt_g(*t) : std::string("unsupported");
    };
    std::cout << "mode offload_s=" << mode_field(est.offload_s)
              << " symmetric_s=" << mode_field(est.symmetric_s)
              << " native_s=" << mode_field(est.native_s)
              << " symmetric_cpu_share=" << fmt_g(est.symmetric_cpu_share) << "\n";
    std::cout << "crossover_threads="
              << (crossover ? std::to_string(*crossover) : std::string("none")) << "\n";
    std::cout << "recommended=" << to_string(est.recommended) << "\n";
    return kExitOk;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse CG kernels, benchmarks and platform mode advisor"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a matrix and write it as Matrix Market");
  gen_cmd->add_option("--stencil", gen.stencil, "grid extents nx ny nz")->expected(3);
  gen_cmd->add_option("--random", gen.random_n, "random SPD matrix of this order");
  gen_cmd->add_option("--seed", gen.seed, "random generator seed");
  gen_cmd->add_option("--out", gen.out, "output .mtx path")->required();

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a linear system with CG");
  solve_cmd->add_option("--matrix", solve.matrix, "Matrix Market input");
  solve_cmd->add_option("--stencil", solve.stencil, "grid extents nx ny nz")->expected(3);
  solve_cmd->add_option("--rhs", solve.rhs, "'ones' or a path to a vector file");
  solve_cmd->add_option("--tol", solve.tol, "residual 2-norm target");
  solve_cmd->add_flag("--rel", solve.relative, "interpret --tol relative to ||b||");
  solve_cmd->add_option("--max-iters", solve.max_iters, "iteration cap (default 10n)");
  solve_cmd->add_option("--threads", solve.threads, "worker threads");
  solve_cmd->add_option("--variant", solve.variant, "scalar|vectorized");
  solve_cmd->add_option("--precond", solve.precond, "none|jacobi");
  solve_cmd->add_flag("--normal-eq", solve.normal_eq, "solve A'Ax = A'b");
  solve_cmd->add_flag("--json", solve.json, "emit a JSON document");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time one kernel configuration");
  bench_cmd->add_option("--kernel", bench.kernel, "saxpy|dot|spmv|cg")->required();
  bench_cmd->add_option("--n", bench.n, "vector length");
  bench_cmd->add_option("--stencil", bench.stencil, "grid extents nx ny nz")->expected(3);
  bench_cmd->add_option("--threads", bench.threads, "worker threads");
  bench_cmd->add_option("--variant", bench.variant, "scalar|vectorized");
  bench_cmd->add_option("--reps", bench.reps, "timed repetitions");
  bench_cmd->add_option("--seed", bench.seed, "data seed");
  bench_cmd->add_option("--out", bench.out, "CSV output path");
  bench_cmd->add_option("--json", bench.json_out, "JSON output path");

  BenchArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "time a kernel across threads and variants");
  sweep_cmd->add_option("--kernel", sweep.kernel, "saxpy|dot|spmv|cg")->required();
  sweep_cmd->add_option("--n", sweep.n, "vector length");
  sweep_cmd->add_option("--stencil", sweep.stencil, "grid extents nx ny nz")->expected(3);
  sweep_cmd->add_option("--threads-list", sweep.thread_list, "ascending thread counts")
      ->delimiter(',');
  sweep_cmd->add_option("--variants", sweep.variants, "subset of scalar,vectorized")
      ->delimiter(',');
  sweep_cmd->add_option("--reps", sweep.reps, "timed repetitions");
  sweep_cmd->add_option("--seed", sweep.seed, "data seed");
  sweep_cmd->add_option("--out", sweep.out, "CSV output path");
  sweep_cmd->add_option("--json", sweep.json_out, "JSON output path");

  AdviseArgs advise;
  CLI::App* advise_cmd =
      app.add_subcommand("advise", "predict offload/symmetric/native mode times");
  advise_cmd->add_option("--workload", advise.workload, "workload key=value file");
  advise_cmd->add_option("--phi", advise.phi, "coprocessor model file");
  advise_cmd->add_option("--cpu", advise.cpu, "CPU model file");
  advise_cmd->add_option("--link", advise.link, "PCIe link model file");
  advise_cmd->add_option("--transfers", advise.transfers, "offload transfer count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (solve_cmd->parsed()) return run_solve(solve);
    if (bench_cmd->parsed()) return run_bench(bench, false);
    if (sweep_cmd->parsed()) return run_bench(sweep, true);
    if (advise_cmd->parsed()) return run_advise(advise);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
