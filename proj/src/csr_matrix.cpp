#include "cgbench/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgbench/errors.hpp"

namespace cgbench {

void CsrMatrix::validate() const {
  if (nrows < 0 || ncols < 0) throw std::invalid_argument("csr: negative shape");
  if (row_ptr.size() != static_cast<std::size_t>(nrows) + 1) {
    throw std::invalid_argument("csr: row_ptr length != nrows + 1");
  }
  if (row_ptr.front() != 0) throw std::invalid_argument("csr: row_ptr[0] != 0");
  if (row_ptr.back() != nnz() || col_idx.size() != values.size()) {
    throw std::invalid_argument("csr: row_ptr[nrows] != nnz");
  }
  for (index_t i = 0; i < nrows; ++i) {
    const index_t lo = row_ptr[static_cast<std::size_t>(i)];
    const index_t hi = row_ptr[static_cast<std::size_t>(i) + 1];
    if (lo > hi) throw std::invalid_argument("csr: row_ptr not nondecreasing");
    for (index_t k = lo; k < hi; ++k) {
      const index_t c = col_idx[static_cast<std::size_t>(k)];
      if (c < 0 || c >= ncols) throw std::invalid_argument("csr: column out of range");
      if (k > lo && col_idx[static_cast<std::size_t>(k) - 1] >= c) {
        throw std::invalid_argument("csr: columns not strictly increasing in row " +
                                    std::to_string(i));
      }
      if (!std::isfinite(values[static_cast<std::size_t>(k)])) {
        throw std::invalid_argument("csr: non-finite value");
      }
    }
  }
}

CsrMatrix csr_from_triplets(index_t nrows, index_t ncols,
                            std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw std::invalid_argument("csr_from_triplets: index (" + std::to_string(t.row) +
                                  "," + std::to_string(t.col) + ") out of range");
    }
    if (!std::isfinite(t.value)) {
      throw std::invalid_argument("csr_from_triplets: non-finite value at (" +
                                  std::to_string(t.row) + "," + std::to_string(t.col) + ")");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col) {
      throw std::invalid_argument("csr_from_triplets: duplicate entry (" +
                                  std::to_string(entries[k].row) + "," +
                                  std::to_string(entries[k].col) + ")");
    }
  }
  CsrMatrix a;
  a.nrows = nrows;
  a.ncols = ncols;
  a.row_ptr.assign(static_cast<std::size_t>(nrows) + 1, 0);
  a.col_idx.reserve(entries.size());
  a.values.reserve(entries.size());
  for (const Triplet& t : entries) {
    a.row_ptr[static_cast<std::size_t>(t.row) + 1]++;
    a.col_idx.push_back(t.col);
    a.values.push_back(t.value);
  }
  for (index_t i = 0; i < nrows; ++i) {
    a.row_ptr[static_cast<std::size_t>(i) + 1] += a.row_ptr[static_cast<std::size_t>(i)];
  }
  a.validate();
  return a;
}

DenseVector spmv(const CsrMatrix& a, const DenseVector& x, KernelVariant variant) {
  if (a.ncols != x.size()) {
    throw DimensionError("spmv: A is " + std::to_string(a.nrows) + "x" +
                         std::to_string(a.ncols) + ", x has length " +
                         std::to_string(x.size()));
  }
  DenseVector y(a.nrows);
  for (index_t i = 0; i < a.nrows; ++i) y[i] = spmv_row(a, x.data(), i, variant);
  return y;
}

DenseVector spmv(const CsrMatrix& a, const DenseVector& x, KernelVariant variant,
                 int threads) {
  if (a.ncols != x.size()) {
    throw DimensionError("spmv: A is " + std::to_string(a.nrows) + "x" +
                         std::to_string(a.ncols) + ", x has length " +
                         std::to_string(x.size()));
  }
  DenseVector y(a.nrows);
  const Partition p = partition_rows(a.nrows, threads);
  parallel_apply(p, [&](IndexRange r) {
    for (index_t i = r.begin; i < r.end; ++i) y[i] = spmv_row(a, x.data(), i, variant);
  });
  return y;
}

DenseVector spmv_transpose(const CsrMatrix& a, const DenseVector& x) {
  if (a.nrows != x.size()) {
    throw DimensionError("spmv_transpose: A is " + std::to_string(a.nrows) + "x" +
                         std::to_string(a.ncols) + ", x has length " +
                         std::to_string(x.size()));
  }
  DenseVector y(a.ncols);
  for (index_t i = 0; i < a.nrows; ++i) {
    const double xi = x[i];
    const index_t lo = a.row_ptr[static_cast<std::size_t>(i)];
    const index_t hi = a.row_ptr[static_cast<std::size_t>(i) + 1];
    for (index_t k = lo; k < hi; ++k) {
      y[a.col_idx[static_cast<std::size_t>(k)]] += a.values[static_cast<std::size_t>(k)] * xi;
    }
  }
  return y;
}

namespace {

// Value at (row, col) or 0; columns within a row are sorted.
double entry_or_zero(const CsrMatrix& a, index_t row, index_t col) {
  const auto lo = a.col_idx.begin() + a.row_ptr[static_cast<std::size_t>(row)];
  const auto hi = a.col_idx.begin() + a.row_ptr[static_cast<std::size_t>(row) + 1];
  const auto it = std::lower_bound(lo, hi, col);
  if (it == hi || *it != col) return 0.0;
  return a.values[static_cast<std::size_t>(it - a.col_idx.begin())];
}

}  // namespace

bool is_symmetric(const CsrMatrix& a, double tol) {
  if (a.nrows != a.ncols) {
    throw std::invalid_argument("is_symmetric: matrix is not square");
  }
  for (index_t i = 0; i < a.nrows; ++i) {
    const index_t lo = a.row_ptr[static_cast<std::size_t>(i)];
    const index_t hi = a.row_ptr[static_cast<std::size_t>(i) + 1];
    for (index_t k = lo; k < hi; ++k) {
      const index_t j = a.col_idx[static_cast<std::size_t>(k)];
      const double v = a.values[static_cast<std::size_t>(k)];
      if (std::abs(v - entry_or_zero(a, j, i)) > tol) return false;
    }
  }
  return true;
}

}  // namespace cgbench
