#include "cgbench/cg.hpp"

#include <cmath>
#include <string>

#include "cgbench/errors.hpp"

namespace cgbench {

CsrOperator::CsrOperator(CsrMatrix a, ExecContext ctx) : a_(std::move(a)), ctx_(ctx) {
  if (a_.nrows != a_.ncols) {
    throw DimensionError("CsrOperator: matrix must be square");
  }
}

DenseVector CsrOperator::apply(const DenseVector& x) const {
  return spmv(a_, x, ctx_.variant, ctx_.threads);
}

NormalEquationsOperator::NormalEquationsOperator(CsrMatrix a, ExecContext ctx)
    : a_(std::move(a)), ctx_(ctx) {
  if (a_.nrows < a_.ncols) {
    throw DimensionError("normal_equations: need nrows >= ncols");
  }
}

DenseVector NormalEquationsOperator::apply(const DenseVector& x) const {
  return spmv_transpose(a_, spmv(a_, x, ctx_.variant, ctx_.threads));
}

namespace {

struct ResolvedConfig {
  double tol2 = 0.0;
  index_t max_iters = 0;
};

ResolvedConfig resolve(const CgConfig& cfg, const DenseVector& b,
                       const ExecContext& ctx) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("cg: tol must be > 0");
  if (cfg.max_iters < 0) throw std::invalid_argument("cg: max_iters must be >= 1");
  ResolvedConfig r;
  r.max_iters = cfg.max_iters > 0 ? cfg.max_iters : std::max<index_t>(1, 10 * b.size());
  double target = cfg.tol;
  if (cfg.relative_tol) {
    target *= std::sqrt(parallel_norm_sq(b, ctx.variant, ctx.threads));
  }
  r.tol2 = target * target;
  return r;
}

DenseVector initial_x(const CgConfig& cfg, index_t n) {
  if (!cfg.x0) return DenseVector(n);
  if (cfg.x0->size() != n) throw DimensionError("cg: x0 length does not match system");
  return *cfg.x0;
}

// r = b - ax, elementwise; not tallied (the counters mirror the
// one-product/two-dot/three-saxpy per-pass accounting plus the entry
// product and entry norm).
DenseVector residual_from(const DenseVector& b, const DenseVector& ax,
                          const ExecContext& ctx) {
  return parallel_saxpy(-1.0, ax, b, ctx.variant, ctx.threads);
}

DenseVector diag_scaled(const DenseVector& d, const DenseVector& r,
                        const ExecContext& ctx) {
  DenseVector z(r.size());
  const Partition p = partition_rows(r.size(), ctx.threads);
  parallel_apply(p, [&](IndexRange range) {
    for (index_t i = range.begin; i < range.end; ++i) z[i] = d[i] * r[i];
  });
  return z;
}

}  // namespace

CgResult cg_solve(const LinearOperator& op, const DenseVector& b,
                  const CgConfig& cfg, const ExecContext& ctx) {
  if (op.dim() != b.size()) {
    throw DimensionError("cg_solve: operator dim " + std::to_string(op.dim()) +
                         " vs rhs length " + std::to_string(b.size()));
  }
  const ResolvedConfig rc = resolve(cfg, b, ctx);
  const auto vdot = [&](const DenseVector& x, const DenseVector& y) {
    return parallel_dot(x, y, ctx.variant, ctx.threads);
  };
  const auto axpy = [&](double a, const DenseVector& x, const DenseVector& y) {
    return parallel_saxpy(a, x, y, ctx.variant, ctx.threads);
  };

  CgResult result;
  CgState s;
  s.x = initial_x(cfg, b.size());

  DenseVector ax = op.apply(s.x);
  result.counters.spmv++;
  s.r = residual_from(b, ax, ctx);
  s.p = s.r;
  s.alpha = parallel_norm_sq(s.r, ctx.variant, ctx.threads);
  result.counters.dot++;
  result.residual_history.push_back(std::sqrt(s.alpha));

  index_t k = 0;
  while (s.alpha > rc.tol2 && k < rc.max_iters) {
    const DenseVector q = op.apply(s.p);  // formed once, used for lambda and r
    result.counters.spmv++;
    const double pq = vdot(s.p, q);
    result.counters.dot++;
    if (pq <= 0.0) {
      throw NotPositiveDefinite("cg_solve: p'Ap = " + std::to_string(pq) +
                                " at iteration " + std::to_string(k));
    }
    s.lambda = s.alpha / pq;
    s.x = axpy(s.lambda, s.p, s.x);
    result.counters.saxpy++;
    s.r = axpy(-s.lambda, q, s.r);
    result.counters.saxpy++;
    const double rr = parallel_norm_sq(s.r, ctx.variant, ctx.threads);
    result.counters.dot++;
    s.p = axpy(rr / s.alpha, s.p, s.r);  // p = r + beta p
    result.counters.saxpy++;
    s.alpha = rr;
    ++k;
    result.residual_history.push_back(std::sqrt(s.alpha));
  }

  result.x = std::move(s.x);
  result.iterations = k;
  result.converged = s.alpha <= rc.tol2;
  return result;
}

std::pair<std::unique_ptr<LinearOperator>, DenseVector> normal_equations(
    const CsrMatrix& a, const DenseVector& b, ExecContext ctx) {
  if (a.nrows != b.size()) {
    throw DimensionError("normal_equations: rhs length " + std::to_string(b.size()) +
                         " does not match nrows " + std::to_string(a.nrows));
  }
  DenseVector rhs = spmv_transpose(a, b);
  return {std::make_unique<NormalEquationsOperator>(a, ctx), std::move(rhs)};
}

DenseVector jacobi_inverse_diag(const CsrMatrix& a) {
  if (a.nrows != a.ncols) {
    throw DimensionError("jacobi_inverse_diag: matrix must be square");
  }
  DenseVector d(a.nrows);
  for (index_t i = 0; i < a.nrows; ++i) {
    double aii = 0.0;
    const index_t lo = a.row_ptr[static_cast<std::size_t>(i)];
    const index_t hi = a.row_ptr[static_cast<std::size_t>(i) + 1];
    for (index_t k = lo; k < hi; ++k) {
      if (a.col_idx[static_cast<std::size_t>(k)] == i) {
        aii = a.values[static_cast<std::size_t>(k)];
        break;
      }
    }
    if (!(aii > 0.0)) {
      throw NotPositiveDefinite("jacobi_inverse_diag: diagonal entry " +
                                std::to_string(i) + " is not positive");
    }
    d[i] = 1.0 / aii;
  }
  return d;
}

// Preconditioned recurrence; per pass: one product, three reductions (p'q,
// ||r||^2 for the stopping test, r'z) and three vector updates, so counters
// come out as {spmv: k+1, dot: 3k+2, saxpy: 3k}. The diagonal scaling
// z = d .* r is not tallied.
CgResult pcg_solve(const CsrMatrix& a, const DenseVector& b, const CgConfig& cfg,
                   const ExecContext& ctx) {
  if (cfg.preconditioner == Preconditioner::None) {
    return cg_solve(CsrOperator(a, ctx), b, cfg, ctx);
  }
  if (a.nrows != a.ncols) throw DimensionError("pcg_solve: matrix must be square");
  if (a.nrows != b.size()) {
    throw DimensionError("pcg_solve: rhs length does not match matrix");
  }
  const ResolvedConfig rc = resolve(cfg, b, ctx);
  const DenseVector d = jacobi_inverse_diag(a);
  const auto vdot = [&](const DenseVector& x, const DenseVector& y) {
    return parallel_dot(x, y, ctx.variant, ctx.threads);
  };
  const auto axpy = [&](double s, const DenseVector& x, const DenseVector& y) {
    return parallel_saxpy(s, x, y, ctx.variant, ctx.threads);
  };

  CgResult result;
  DenseVector x = initial_x(cfg, b.size());

  DenseVector ax = spmv(a, x, ctx.variant, ctx.threads);
  result.counters.spmv++;
  DenseVector r = residual_from(b, ax, ctx);
  double rr = parallel_norm_sq(r, ctx.variant, ctx.threads);
  result.counters.dot++;
  DenseVector z = diag_scaled(d, r, ctx);
  DenseVector p = z;
  double rz = vdot(r, z);
  result.counters.dot++;
  result.residual_history.push_back(std::sqrt(rr));

  index_t k = 0;
  while (rr > rc.tol2 && k < rc.max_iters) {
    const DenseVector q = spmv(a, p, ctx.variant, ctx.threads);
    result.counters.spmv++;
    const double pq = vdot(p, q);
    result.counters.dot++;
    if (pq <= 0.0) {
      throw NotPositiveDefinite("pcg_solve: p'Ap = " + std::to_string(pq) +
                                " at iteration " + std::to_string(k));
    }
    const double lambda = rz / pq;
    x = axpy(lambda, p, x);
    result.counters.saxpy++;
    r = axpy(-lambda, q, r);
    result.counters.saxpy++;
    rr = parallel_norm_sq(r, ctx.variant, ctx.threads);
    result.counters.dot++;
    z = diag_scaled(d, r, ctx);
    const double rz_next = vdot(r, z);
    result.counters.dot++;
    p = axpy(rz_next / rz, p, z);  // p = z + beta p
    result.counters.saxpy++;
    rz = rz_next;
    ++k;
    result.residual_history.push_back(std::sqrt(rr));
  }

  result.x = std::move(x);
  result.iterations = k;
  result.converged = rr <= rc.tol2;
  return result;
}

}  // namespace cgbench
