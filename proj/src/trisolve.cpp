#include "rlu/trisolve.hpp"

#include <cmath>

namespace rlu {

void SolveWorkspace::ensure(index_t n) {
  if (static_cast<index_t>(permuted_rhs.capacity()) < n) ++allocation_events;
  permuted_rhs.resize(n);
  if (static_cast<index_t>(intermediate.capacity()) < n) ++allocation_events;
  intermediate.resize(n);
  const std::uint64_t before = scheduler.allocation_events();
  scheduler.ensure(n);
  allocation_events += scheduler.allocation_events() - before;
}

namespace {

void check_dims(const NumericFactors& f, const DenseVector& y, const char* who) {
  if (!f.valid) throw Error(std::string(who) + ": factors are not valid");
  if (static_cast<index_t>(y.size()) != f.symbolic->n) {
    throw DimensionError(std::string(who) + ": vector length " + std::to_string(y.size()) +
                         ", expected " + std::to_string(f.symbolic->n));
  }
}

// x_i = y_i - sum_{d<i} l_id x_d. Safe in place (x == y).
void lower_core(const NumericFactors& f, const double* y, double* x, SyncFreeScheduler& sched,
                const ExecPolicy& exec) {
  const SymbolicFactors& sym = *f.symbolic;
  const CsrMatrix& F = sym.combined_pattern;
  const double* values = f.values.data();
  sched.run(sym.n, exec, [&](index_t i, const SyncFreeScheduler::Waiter& w) {
    double acc = y[i];
    for (index_t k = F.row_offsets[i]; k < sym.diag_pos[i]; ++k) {
      const index_t d = F.col_indices[k];
      w.wait(d);
      acc -= values[k] * x[d];
    }
    x[i] = acc;
  });
}

// x_i = (y_i - sum_{j>i} u_ij x_j) / u_ii, descending i. Rows are scheduled
// through the virtual index n-1-i so claims ascend in dependency order.
void upper_core(const NumericFactors& f, const double* y, double* x, SyncFreeScheduler& sched,
                const ExecPolicy& exec) {
  const SymbolicFactors& sym = *f.symbolic;
  const CsrMatrix& F = sym.combined_pattern;
  const double* values = f.values.data();
  const index_t n = sym.n;
  sched.run(n, exec, [&](index_t v, const SyncFreeScheduler::Waiter& w) {
    const index_t i = n - 1 - v;
    double acc = y[i];
    for (index_t k = sym.diag_pos[i] + 1; k < F.row_offsets[i + 1]; ++k) {
      const index_t j = F.col_indices[k];
      w.wait(n - 1 - j);
      acc -= values[k] * x[j];
    }
    const double diag = values[sym.diag_pos[i]];
    if (diag == 0.0) sched.fail(v);
    x[i] = acc / diag;
  });
  if (sched.failed_row() >= 0) {
    const index_t row = n - 1 - sched.failed_row();
    throw ZeroPivotError("zero diagonal at row " + std::to_string(row), row);
  }
}

}  // namespace

DenseVector lower_solve(const NumericFactors& factors, const DenseVector& y,
                        const ExecPolicy& exec) {
  check_dims(factors, y, "lower_solve");
  DenseVector x(y.size());
  SyncFreeScheduler sched;
  lower_core(factors, y.data(), x.data(), sched, exec);
  return x;
}

DenseVector upper_solve(const NumericFactors& factors, const DenseVector& y,
                        const ExecPolicy& exec) {
  check_dims(factors, y, "upper_solve");
  DenseVector x(y.size());
  SyncFreeScheduler sched;
  upper_core(factors, y.data(), x.data(), sched, exec);
  return x;
}

void solve_system(const NumericFactors& factors, const DenseVector& b, SolveWorkspace& ws,
                  DenseVector& x, const ExecPolicy& exec) {
  check_dims(factors, b, "solve_system");
  const SymbolicFactors& sym = *factors.symbolic;
  const index_t n = sym.n;
  ws.ensure(n);
  if (static_cast<index_t>(x.size()) != n) x.resize(n);

  // w[p(i)] = D_r[i] * b[i]
  const auto& p = sym.amd.forward;
  if (sym.match) {
    const auto& dr = sym.match->scaling.row_scale;
    for (index_t i = 0; i < n; ++i) ws.permuted_rhs[p[i]] = dr[i] * b[i];
  } else {
    for (index_t i = 0; i < n; ++i) ws.permuted_rhs[p[i]] = b[i];
  }

  lower_core(factors, ws.permuted_rhs.data(), ws.intermediate.data(), ws.scheduler, exec);
  upper_core(factors, ws.intermediate.data(), ws.permuted_rhs.data(), ws.scheduler, exec);

  // x[j] = D_c[j] * t[p(q(j))]
  const double* t = ws.permuted_rhs.data();
  if (sym.match) {
    const auto& q = sym.match->col_perm.forward;
    const auto& dc = sym.match->scaling.col_scale;
    for (index_t j = 0; j < n; ++j) x[j] = dc[j] * t[p[q[j]]];
  } else {
    for (index_t j = 0; j < n; ++j) x[j] = t[p[j]];
  }
}

DenseVector solve_system(const NumericFactors& factors, const DenseVector& b, SolveWorkspace& ws,
                         const ExecPolicy& exec) {
  DenseVector x;
  solve_system(factors, b, ws, x, exec);
  return x;
}

}  // namespace rlu
