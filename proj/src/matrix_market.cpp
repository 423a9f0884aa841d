#include "cgbench/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "cgbench/errors.hpp"

namespace cgbench {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

CsrMatrix mm_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("mm_read: cannot open '" + path + "'");

  std::string banner;
  if (!std::getline(in, banner)) throw ParseError("mm_read: empty file");
  std::istringstream head(banner);
  std::string tag, object, format, field, symmetry;
  head >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket" || lower(object) != "matrix") {
    throw ParseError("mm_read: not a MatrixMarket matrix file");
  }
  if (lower(format) != "coordinate") {
    throw ParseError("mm_read: only coordinate format is supported");
  }
  if (lower(field) != "real") {
    throw ParseError("mm_read: only real values are supported");
  }
  const std::string sym = lower(symmetry);
  if (sym != "general" && sym != "symmetric") {
    throw ParseError("mm_read: only general/symmetric storage is supported");
  }

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  if (line.empty() || line[0] == '%') throw ParseError("mm_read: missing size line");
  index_t nrows = 0, ncols = 0, nnz = 0;
  {
    std::istringstream sizes(line);
    if (!(sizes >> nrows >> ncols >> nnz) || nrows < 0 || ncols < 0 || nnz < 0) {
      throw ParseError("mm_read: malformed size line");
    }
  }

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (index_t k = 0; k < nnz; ++k) {
    index_t i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw ParseError("mm_read: truncated entry list");
    if (i < 1 || i > nrows || j < 1 || j > ncols) {
      throw ParseError("mm_read: entry index out of range at line " + std::to_string(k));
    }
    entries.push_back({i - 1, j - 1, v});
    if (sym == "symmetric" && i != j) entries.push_back({j - 1, i - 1, v});
  }
  try {
    return csr_from_triplets(nrows, ncols, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("mm_read: ") + e.what());
  }
}

void mm_write(const CsrMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("mm_write: cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.nrows << " " << a.ncols << " " << a.nnz() << "\n";
  char buf[64];
  for (index_t i = 0; i < a.nrows; ++i) {
    const index_t lo = a.row_ptr[static_cast<std::size_t>(i)];
    const index_t hi = a.row_ptr[static_cast<std::size_t>(i) + 1];
    for (index_t k = lo; k < hi; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", a.values[static_cast<std::size_t>(k)]);
      out << (i + 1) << " " << (a.col_idx[static_cast<std::size_t>(k)] + 1) << " "
          << buf << "\n";
    }
  }
  if (!out) throw IoError("mm_write: write to '" + path + "' failed");
}

DenseVector read_vector(const std::string& path, index_t n) {
  std::ifstream in(path);
  if (!in) throw IoError("read_vector: cannot open '" + path + "'");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (static_cast<index_t>(values.size()) != n) {
    throw ParseError("read_vector: expected " + std::to_string(n) + " values, got " +
                     std::to_string(values.size()));
  }
  return DenseVector::from_values(std::move(values));
}

}  // namespace cgbench
