#pragma once

#include <cstdint>

#include "cgbench/dense_vector.hpp"

// Dense vector kernels: saxpy, dot, squared norm. Each comes in two
// variants. Scalar is the plain reference loop. Vectorized is written as a
// lane-structured loop over blocks of kLaneWidth elements so the compiler
// can map it onto SIMD units; no intrinsics. Both variants are serial over
// their input range; threading lives in parallel.hpp.

namespace cgbench {

enum class KernelVariant { Scalar, Vectorized };

// Lanes per vector step for double precision.
inline constexpr index_t kLaneWidth = 8;

// One timed kernel measurement.
struct KernelStats {
  double flops = 0.0;
  double bytes_moved = 0.0;
  double elapsed = 0.0;  // seconds
};

// Flop accounting conventions. dot is counted as 2n (not 2n-1) so that
// GFLOP/s figures are reproducible from n alone.
inline double saxpy_flops(index_t n) { return 2.0 * static_cast<double>(n); }
inline double dot_flops(index_t n) { return 2.0 * static_cast<double>(n); }
inline double norm_sq_flops(index_t n) { return 2.0 * static_cast<double>(n); }
inline double spmv_flops(index_t nnz) { return 2.0 * static_cast<double>(nnz); }

// Byte accounting: 8-byte loads/stores actually touched, cold-cache model.
inline double saxpy_bytes(index_t n) { return 24.0 * static_cast<double>(n); }  // read x,y; write z
inline double dot_bytes(index_t n) { return 16.0 * static_cast<double>(n); }    // read x,y
inline double norm_sq_bytes(index_t n) { return 8.0 * static_cast<double>(n); } // read x

// ---- raw cores ------------------------------------------------------------

inline void saxpy_core_scalar(double a, const double* x, const double* y,
                              double* z, index_t n) {
  for (index_t i = 0; i < n; ++i) z[i] = a * x[i] + y[i];
}

inline void saxpy_core_lanes(double a, const double* x, const double* y,
                             double* z, index_t n) {
  const index_t body = n - n % kLaneWidth;
  for (index_t i = 0; i < body; i += kLaneWidth) {
    for (index_t l = 0; l < kLaneWidth; ++l) z[i + l] = a * x[i + l] + y[i + l];
  }
  for (index_t i = body; i < n; ++i) z[i] = a * x[i] + y[i];
}

inline double dot_core_scalar(const double* x, const double* y, index_t n) {
  double acc = 0.0;
  for (index_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

// kLaneWidth independent accumulators over the block body, combined in lane
// order 0..W-1, then the tail added in index order. The reduction tree is
// fixed, so results are identical run to run.
inline double dot_core_lanes(const double* x, const double* y, index_t n) {
  double lanes[kLaneWidth] = {0.0};
  const index_t body = n - n % kLaneWidth;
  for (index_t i = 0; i < body; i += kLaneWidth) {
    for (index_t l = 0; l < kLaneWidth; ++l) lanes[l] += x[i + l] * y[i + l];
  }
  double acc = 0.0;
  for (index_t l = 0; l < kLaneWidth; ++l) acc += lanes[l];
  for (index_t i = body; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

inline void saxpy_core(double a, const double* x, const double* y, double* z,
                       index_t n, KernelVariant variant) {
  if (variant == KernelVariant::Scalar) {
    saxpy_core_scalar(a, x, y, z, n);
  } else {
    saxpy_core_lanes(a, x, y, z, n);
  }
}

inline double dot_core(const double* x, const double* y, index_t n,
                       KernelVariant variant) {
  return variant == KernelVariant::Scalar ? dot_core_scalar(x, y, n)
                                          : dot_core_lanes(x, y, n);
}

// ---- vector-level API -------------------------------------------------------

// z = a*x + y
inline DenseVector saxpy(double a, const DenseVector& x, const DenseVector& y,
                         KernelVariant variant = KernelVariant::Vectorized) {
  require_same_length(x, y, "saxpy");
  DenseVector z(x.size());
  saxpy_core(a, x.data(), y.data(), z.data(), x.size(), variant);
  return z;
}

inline double dot(const DenseVector& x, const DenseVector& y,
                  KernelVariant variant = KernelVariant::Vectorized) {
  require_same_length(x, y, "dot");
  return dot_core(x.data(), y.data(), x.size(), variant);
}

inline double norm_sq(const DenseVector& x,
                      KernelVariant variant = KernelVariant::Vectorized) {
  return dot_core(x.data(), x.data(), x.size(), variant);
}

}  // namespace cgbench
