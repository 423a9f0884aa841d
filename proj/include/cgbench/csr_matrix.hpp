#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "cgbench/dense_vector.hpp"
#include "cgbench/parallel.hpp"

namespace cgbench {

// Compressed sparse row matrix. Immutable after construction; within each
// row column indices are strictly increasing.
struct CsrMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> row_ptr;  // nrows + 1 offsets, row_ptr[0] == 0
  std::vector<index_t> col_idx;
  std::vector<double> values;

  index_t nnz() const { return static_cast<index_t>(values.size()); }
  bool operator==(const CsrMatrix&) const = default;

  // Checks every CSR structural invariant; throws std::invalid_argument.
  void validate() const;
};

struct Triplet {
  index_t row = 0;
  index_t col = 0;
  double value = 0.0;
};

// Canonical CSR from unordered (row, col, value) entries. Out-of-range
// indices, duplicate coordinates and non-finite values are errors.
CsrMatrix csr_from_triplets(index_t nrows, index_t ncols,
                            std::vector<Triplet> entries);

// y = A x, rows in ascending order, entries within a row in column order.
DenseVector spmv(const CsrMatrix& a, const DenseVector& x,
                 KernelVariant variant = KernelVariant::Scalar);

// Row-partitioned SpMV; output rows are disjoint, so the result is bitwise
// equal to serial spmv for any thread count.
DenseVector spmv(const CsrMatrix& a, const DenseVector& x, KernelVariant variant,
                 int threads);

// y = A' x without materializing the transpose. Serial: output entries are
// scattered, not partitioned.
DenseVector spmv_transpose(const CsrMatrix& a, const DenseVector& x);

// True iff |A[i,j] - A[j,i]| <= tol for all coordinates; missing entries
// count as zero. Throws on non-square input.
bool is_symmetric(const CsrMatrix& a, double tol);

// Single-row kernel, shared by serial and partitioned SpMV. An accumulation
// order fixed to ascending column position keeps results reproducible.
inline double spmv_row(const CsrMatrix& a, const double* x, index_t row,
                       KernelVariant variant) {
  const index_t lo = a.row_ptr[static_cast<std::size_t>(row)];
  const index_t hi = a.row_ptr[static_cast<std::size_t>(row) + 1];
  const index_t len = hi - lo;
  const index_t* cols = a.col_idx.data() + lo;
  const double* vals = a.values.data() + lo;
  if (variant == KernelVariant::Scalar) {
    double acc = 0.0;
    for (index_t k = 0; k < len; ++k) acc += vals[k] * x[cols[k]];
    return acc;
  }
  double lanes[kLaneWidth] = {0.0};
  const index_t body = len - len % kLaneWidth;
  for (index_t k = 0; k < body; k += kLaneWidth) {
    for (index_t l = 0; l < kLaneWidth; ++l) lanes[l] += vals[k + l] * x[cols[k + l]];
  }
  double acc = 0.0;
  for (index_t l = 0; l < kLaneWidth; ++l) acc += lanes[l];
  for (index_t k = body; k < len; ++k) acc += vals[k] * x[cols[k]];
  return acc;
}

}  // namespace cgbench
