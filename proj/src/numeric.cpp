#include "rlu/numeric.hpp"

#include <cassert>
#include <cmath>

namespace rlu {

NumericFactors::NumericFactors(std::shared_ptr<const SymbolicFactors> sym, FactorOptions opt)
    : symbolic(std::move(sym)), options(opt), scheduler(std::make_unique<SyncFreeScheduler>()) {
  values.resize(symbolic->combined_pattern.nnz());
  scheduler->ensure(symbolic->n);
}

void scatter_values(const SymbolicFactors& sym, const CsrMatrix& A, std::vector<double>& out) {
  if (!pattern_equal(A, sym.source_pattern)) {
    throw PatternMismatchError("matrix pattern differs from the analyzed pattern");
  }
  if (!A.has_values()) throw Error("scatter_values: matrix has no values");
  out.assign(sym.combined_pattern.nnz(), 0.0);
  for (std::size_t k = 0; k < sym.scatter_map.size(); ++k) {
    out[sym.scatter_map[k]] = A.values[k] * sym.scatter_scale[k];
  }
}

namespace {

void eliminate(NumericFactors& nf) {
  const SymbolicFactors& sym = *nf.symbolic;
  const CsrMatrix& F = sym.combined_pattern;
  double* values = nf.values.data();
  const double pivot_floor = nf.options.pivot_floor;
  SyncFreeScheduler& sched = *nf.scheduler;

  sched.run(sym.n, nf.options.exec, [&](index_t i, const SyncFreeScheduler::Waiter& w) {
    const index_t lo = F.row_offsets[i];
    const index_t diag = sym.diag_pos[i];
    for (index_t k = lo; k < diag; ++k) {
      const index_t d = F.col_indices[k];
      w.wait(d);
      const double alpha = values[k] / values[sym.diag_pos[d]];
      values[k] = alpha;
      for (index_t t = sym.diag_pos[d] + 1; t < F.row_offsets[d + 1]; ++t) {
        const index_t off = sym.row_lookup.lookup(i, F.col_indices[t]);
        assert(off >= 0 && "fill pattern is closed under row updates");
        values[lo + off] -= alpha * values[t];
      }
    }
    if (std::fabs(values[diag]) <= pivot_floor) sched.fail(i);
  });

  if (sched.failed_row() >= 0) {
    nf.valid = false;
    throw ZeroPivotError("zero pivot at row " + std::to_string(sched.failed_row()),
                         sched.failed_row());
  }
  nf.valid = true;
  ++nf.generation;
}

}  // namespace

NumericFactors factorize(std::shared_ptr<const SymbolicFactors> sym, const CsrMatrix& A,
                         const FactorOptions& options) {
  NumericFactors nf(std::move(sym), options);
  scatter_values(*nf.symbolic, A, nf.values);
  eliminate(nf);
  return nf;
}

void refactorize(NumericFactors& factors, const CsrMatrix& A) {
  scatter_values(*factors.symbolic, A, factors.values);
  eliminate(factors);
}

void reset_values(NumericFactors& factors, const CsrMatrix& A) {
  scatter_values(*factors.symbolic, A, factors.values);
}

void factorize_scattered(NumericFactors& factors) { eliminate(factors); }

}  // namespace rlu
