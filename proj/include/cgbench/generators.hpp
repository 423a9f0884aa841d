#pragma once

#include <cstdint>

#include "cgbench/csr_matrix.hpp"

namespace cgbench {

// Regular nx x ny x nz grid with unit spacing and Dirichlet boundaries
// folded into the right-hand side.
struct StencilSpec {
  index_t nx = 1;
  index_t ny = 1;
  index_t nz = 1;
  index_t n() const { return nx * ny * nz; }
};

// 7-point Laplacian of the grid: diagonal 6, each existing axis neighbor -1.
// The diagonal stays 6 when extents degenerate to 1 so a single convention
// covers 1-D, 2-D and 3-D grids. Symmetric positive definite.
CsrMatrix gen_stencil(const StencilSpec& spec);

// Random symmetric strictly diagonally dominant matrix with positive
// diagonal, hence SPD. Off-diagonals are drawn in [-1, 1]; the diagonal is
// 1 + sum of absolute row off-diagonals. Deterministic for fixed (n, seed).
CsrMatrix gen_random_spd(index_t n, std::uint64_t seed);

}  // namespace cgbench
