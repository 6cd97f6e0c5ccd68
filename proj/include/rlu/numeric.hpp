#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rlu/schedule.hpp"
#include "rlu/symbolic.hpp"

namespace rlu {

struct FactorOptions {
  ExecPolicy exec;
  double pivot_floor = 1e-30;  // |u_ii| at or below this fails the row
};

/// Numeric values aligned to the combined L+U pattern: strict-lower slots are
/// L entries (unit diagonal implicit), diagonal and upper slots are U entries.
/// One instance is mutated by exactly one (re)factorization at a time;
/// distinct instances may factorize concurrently against one shared
/// SymbolicFactors.
struct NumericFactors {
  std::shared_ptr<const SymbolicFactors> symbolic;
  std::vector<double> values;
  FactorOptions options;
  std::uint64_t generation = 0;  // incremented per successful (re)factorization
  bool valid = false;
  std::unique_ptr<SyncFreeScheduler> scheduler;  // reused across refactorizations

  explicit NumericFactors(std::shared_ptr<const SymbolicFactors> sym, FactorOptions opt = {});
};

/// Places each source entry, scaled and permuted, at its slot in the combined
/// pattern; fill-in slots are set to exactly 0. Throws PatternMismatchError
/// when A's pattern differs from the one captured at analysis time.
void scatter_values(const SymbolicFactors& sym, const CsrMatrix& A, std::vector<double>& out);

/// Pivot-free up-looking LU of the transformed matrix. For each row, in
/// ascending order of its strict-lower columns d: alpha = a_id / u_dd is
/// stored as l_id and row d's upper entries update the row through its
/// lookup. Throws ZeroPivotError on a pivot at or below options.pivot_floor.
NumericFactors factorize(std::shared_ptr<const SymbolicFactors> sym, const CsrMatrix& A,
                         const FactorOptions& options = {});

/// Recomputes the values in place with the same options, reusing every
/// pattern/lookup/permutation structure; bitwise identical to a fresh
/// factorize of the same matrix.
void refactorize(NumericFactors& factors, const CsrMatrix& A);

// Split entry points so callers can attribute scatter and elimination time
// separately; refactorize(f, A) == reset_values(f, A) + factorize_scattered(f).
void reset_values(NumericFactors& factors, const CsrMatrix& A);
void factorize_scattered(NumericFactors& factors);

}  // namespace rlu
