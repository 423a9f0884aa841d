#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cgbench/csr_matrix.hpp"
#include "cgbench/dense_vector.hpp"
#include "cgbench/parallel.hpp"

namespace cgbench {

// Abstract SPD operator the solver iterates with. apply must be linear;
// concrete forms below are CSR-backed and normal-equations.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual DenseVector apply(const DenseVector& x) const = 0;
  virtual index_t dim() const = 0;
};

class CsrOperator final : public LinearOperator {
 public:
  explicit CsrOperator(CsrMatrix a, ExecContext ctx = {});
  DenseVector apply(const DenseVector& x) const override;
  index_t dim() const override { return a_.nrows; }
  const CsrMatrix& matrix() const { return a_; }

 private:
  CsrMatrix a_;
  ExecContext ctx_;
};

// x -> A'(A x); A'A is never materialized. One apply costs two SpMV passes
// but is counted as a single operator application.
class NormalEquationsOperator final : public LinearOperator {
 public:
  explicit NormalEquationsOperator(CsrMatrix a, ExecContext ctx = {});
  DenseVector apply(const DenseVector& x) const override;
  index_t dim() const override { return a_.ncols; }

 private:
  CsrMatrix a_;
  ExecContext ctx_;
};

enum class Preconditioner { None, Jacobi };

struct CgConfig {
  double tol = 1e-8;          // residual 2-norm target
  bool relative_tol = false;  // when true the target is tol * ||b||
  index_t max_iters = 0;      // 0 means 10 * n
  std::optional<DenseVector> x0;  // default: zero vector
  Preconditioner preconditioner = Preconditioner::None;
};

// Live solver state: solution iterate, residual, search direction, alpha =
// ||r||^2 and the most recent step length lambda.
struct CgState {
  DenseVector x;
  DenseVector r;
  DenseVector p;
  double alpha = 0.0;
  double lambda = 0.0;
};

// Operator applications, dot-family reductions (dot and squared norms) and
// saxpy-style vector updates performed by a solve.
struct OpCounters {
  index_t spmv = 0;
  index_t dot = 0;
  index_t saxpy = 0;
  bool operator==(const OpCounters&) const = default;
};

struct CgResult {
  DenseVector x;
  index_t iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // ||r|| after 0..iterations steps
  OpCounters counters;
};

// Conjugate gradient iteration:
//   r = b - A x;  p = r;  alpha = ||r||^2
//   while alpha > tol^2:
//     lambda = alpha / (p'Ap);  x += lambda p;  r -= lambda A p
//     p = r + (||r||^2 / alpha) p;  alpha = ||r||^2
// The product A p is formed once per pass and reused; ||r||^2 is computed
// once and reused for the direction update and the next alpha, so each pass
// costs one operator application, two reductions and three vector updates.
// Throws NotPositiveDefinite when p'Ap <= 0 while alpha > 0; hitting
// max_iters is reported via converged = false, not an error.
CgResult cg_solve(const LinearOperator& op, const DenseVector& b,
                  const CgConfig& cfg, const ExecContext& ctx = {});

// Operator x -> A'(Ax) and right-hand side A'b; solving the returned system
// solves A x = b for any full-rank A, at the cost of squaring the condition
// number. Rectangular A with nrows >= ncols is accepted.
std::pair<std::unique_ptr<LinearOperator>, DenseVector> normal_equations(
    const CsrMatrix& a, const DenseVector& b, ExecContext ctx = {});

// d[i] = 1 / A[i,i]; requires a strictly positive diagonal.
DenseVector jacobi_inverse_diag(const CsrMatrix& a);

// Jacobi-preconditioned CG (z = M^{-1} r with M = diag(A), beta from r'z
// ratios); the stopping test stays on the true residual norm so tol means
// the same thing as in cg_solve. With Preconditioner::None this is exactly
// cg_solve on the CSR operator.
CgResult pcg_solve(const CsrMatrix& a, const DenseVector& b, const CgConfig& cfg,
                   const ExecContext& ctx = {});

// 2*nnz + 10*n under the 2n-per-dot convention: one SpMV, two dots, three
// saxpys per pass.
inline index_t flops_per_cg_iteration(index_t n, index_t nnz) {
  return 2 * nnz + 10 * n;
}

}  // namespace cgbench
