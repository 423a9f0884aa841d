#include "cgbench/generators.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace cgbench {

namespace {

constexpr index_t kMaxStencilRows = index_t{1} << 31;

// Uniform double in [0, 1) from the top 53 bits of the generator output;
// avoids distribution objects so streams are identical across standard
// library implementations.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

CsrMatrix gen_stencil(const StencilSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1) {
    throw std::invalid_argument("gen_stencil: extents must be >= 1");
  }
  if (spec.nx > kMaxStencilRows / spec.ny ||
      spec.nx * spec.ny > kMaxStencilRows / spec.nz) {
    throw std::invalid_argument("gen_stencil: grid size overflows row count");
  }
  const index_t nx = spec.nx, ny = spec.ny, nz = spec.nz;
  const index_t n = nx * ny * nz;

  CsrMatrix a;
  a.nrows = n;
  a.ncols = n;
  a.row_ptr.reserve(static_cast<std::size_t>(n) + 1);
  a.row_ptr.push_back(0);
  a.col_idx.reserve(static_cast<std::size_t>(7 * n));
  a.values.reserve(static_cast<std::size_t>(7 * n));

  // Row id = ix + nx*(iy + ny*iz); neighbor offsets emitted in ascending
  // column order.
  for (index_t iz = 0; iz < nz; ++iz) {
    for (index_t iy = 0; iy < ny; ++iy) {
      for (index_t ix = 0; ix < nx; ++ix) {
        const index_t row = ix + nx * (iy + ny * iz);
        auto put = [&](index_t col, double v) {
          a.col_idx.push_back(col);
          a.values.push_back(v);
        };
        if (iz > 0) put(row - nx * ny, -1.0);
        if (iy > 0) put(row - nx, -1.0);
        if (ix > 0) put(row - 1, -1.0);
        put(row, 6.0);
        if (ix < nx - 1) put(row + 1, -1.0);
        if (iy < ny - 1) put(row + nx, -1.0);
        if (iz < nz - 1) put(row + nx * ny, -1.0);
        a.row_ptr.push_back(static_cast<index_t>(a.col_idx.size()));
      }
    }
  }
  a.validate();
  return a;
}

CsrMatrix gen_random_spd(index_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random_spd: n must be >= 1");
  std::mt19937_64 rng(seed);

  // Lower-triangle coordinates first, then mirrored; diagonal accumulates
  // strict dominance.
  std::vector<std::set<index_t>> below(static_cast<std::size_t>(n));
  std::vector<Triplet> entries;
  std::vector<double> diag(static_cast<std::size_t>(n), 1.0);
  for (index_t i = 1; i < n; ++i) {
    const index_t want = static_cast<index_t>(rng() % 4);  // 0..3 neighbors
    const index_t k = std::min<index_t>(want, i);
    auto& cols = below[static_cast<std::size_t>(i)];
    while (static_cast<index_t>(cols.size()) < k) {
      cols.insert(static_cast<index_t>(rng() % static_cast<std::uint64_t>(i)));
    }
    for (index_t j : cols) {
      const double v = 2.0 * next_unit(rng) - 1.0;
      entries.push_back({i, j, v});
      entries.push_back({j, i, v});
      diag[static_cast<std::size_t>(i)] += std::abs(v);
      diag[static_cast<std::size_t>(j)] += std::abs(v);
    }
  }
  for (index_t i = 0; i < n; ++i) {
    entries.push_back({i, i, diag[static_cast<std::size_t>(i)]});
  }
  return csr_from_triplets(n, n, std::move(entries));
}

}  // namespace cgbench
