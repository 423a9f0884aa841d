#pragma once

#include <string>

#include "cgbench/csr_matrix.hpp"

namespace cgbench {

// Matrix Market coordinate format, real values, `general` or `symmetric`
// storage, 1-based indices, `%` comment lines. Symmetric storage is expanded
// to a full CSR on read. Values are written with 17 significant digits so a
// write/read round trip is exact.

CsrMatrix mm_read(const std::string& path);

void mm_write(const CsrMatrix& a, const std::string& path);

// Whitespace-separated doubles, one vector; length must match n.
DenseVector read_vector(const std::string& path, index_t n);

}  // namespace cgbench
