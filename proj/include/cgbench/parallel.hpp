#pragma once

#include <algorithm>
#include <exception>
#include <string>
#include <vector>

#include "cgbench/dense_vector.hpp"
#include "cgbench/kernels.hpp"

// Fork-join execution of contiguous index ranges. Workers are OpenMP
// threads; builds without OpenMP degrade to serial execution of the same
// ranges, so results are identical either way. Reductions combine per-range
// partials in ascending range order on the calling thread, which makes every
// parallel kernel deterministic for a fixed (n, threads).

namespace cgbench {

struct IndexRange {
  index_t begin = 0;
  index_t end = 0;
  index_t size() const { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

// Disjoint contiguous ranges covering [0, n); sizes differ by at most one.
struct Partition {
  std::vector<IndexRange> ranges;
  index_t extent = 0;
};

// min(t, n) balanced contiguous ranges; empty partition for n == 0.
inline Partition partition_rows(index_t n, int t) {
  if (t <= 0) throw std::invalid_argument("partition_rows: thread count must be >= 1");
  if (n < 0) throw std::invalid_argument("partition_rows: negative extent");
  Partition p;
  p.extent = n;
  const index_t k = std::min<index_t>(t, n);
  p.ranges.reserve(static_cast<std::size_t>(k));
  index_t start = 0;
  for (index_t r = 0; r < k; ++r) {
    const index_t len = n / k + (r < n % k ? 1 : 0);
    p.ranges.push_back({start, start + len});
    start += len;
  }
  return p;
}

// Runs task(range) once per range; blocks until all ranges finished. The
// lowest-indexed failure is rethrown after every task has settled.
template <typename Task>
void parallel_apply(const Partition& p, Task&& task) {
  const int nr = static_cast<int>(p.ranges.size());
  if (nr == 0) return;
  if (nr == 1) {
    task(p.ranges[0]);
    return;
  }
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(nr));
#pragma omp parallel for schedule(static) num_threads(nr)
  for (int r = 0; r < nr; ++r) {
    try {
      task(p.ranges[static_cast<std::size_t>(r)]);
    } catch (...) {
      failures[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

// Per-range partials combined serially in range order on the calling thread.
template <typename Partial, typename Combine>
double parallel_reduce(const Partition& p, Partial&& partial, Combine&& combine,
                       double init = 0.0) {
  const int nr = static_cast<int>(p.ranges.size());
  if (nr == 0) return init;
  std::vector<double> partials(static_cast<std::size_t>(nr), 0.0);
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(nr));
#pragma omp parallel for schedule(static) num_threads(nr)
  for (int r = 0; r < nr; ++r) {
    try {
      partials[static_cast<std::size_t>(r)] = partial(p.ranges[static_cast<std::size_t>(r)]);
    } catch (...) {
      failures[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  double acc = init;
  for (int r = 0; r < nr; ++r) acc = combine(acc, partials[static_cast<std::size_t>(r)]);
  return acc;
}

// How kernels run: which variant and over how many threads.
struct ExecContext {
  KernelVariant variant = KernelVariant::Vectorized;
  int threads = 1;
};

// Partitioned kernels. saxpy writes are disjoint per range, so the result is
// bitwise equal to the serial kernel for every thread count.
inline DenseVector parallel_saxpy(double a, const DenseVector& x,
                                  const DenseVector& y, KernelVariant variant,
                                  int threads) {
  require_same_length(x, y, "saxpy");
  DenseVector z(x.size());
  const Partition p = partition_rows(x.size(), threads);
  parallel_apply(p, [&](IndexRange r) {
    saxpy_core(a, x.data() + r.begin, y.data() + r.begin, z.data() + r.begin,
               r.size(), variant);
  });
  return z;
}

inline double parallel_dot(const DenseVector& x, const DenseVector& y,
                           KernelVariant variant, int threads) {
  require_same_length(x, y, "dot");
  const Partition p = partition_rows(x.size(), threads);
  return parallel_reduce(
      p,
      [&](IndexRange r) {
        return dot_core(x.data() + r.begin, y.data() + r.begin, r.size(), variant);
      },
      [](double acc, double part) { return acc + part; });
}

inline double parallel_norm_sq(const DenseVector& x, KernelVariant variant,
                               int threads) {
  const Partition p = partition_rows(x.size(), threads);
  return parallel_reduce(
      p,
      [&](IndexRange r) {
        return dot_core(x.data() + r.begin, x.data() + r.begin, r.size(), variant);
      },
      [](double acc, double part) { return acc + part; });
}

}  // namespace cgbench
