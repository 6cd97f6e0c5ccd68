#pragma once

#include <cstdint>

#include "rlu/numeric.hpp"

namespace rlu {

/// Persistent buffers and ready flags for repeated solves against one set of
/// factors; allocated once and reused. One workspace serves one solve at a
/// time; distinct workspaces enable concurrent solves on shared factors.
struct SolveWorkspace {
  DenseVector permuted_rhs;
  DenseVector intermediate;
  SyncFreeScheduler scheduler;
  std::uint64_t allocation_events = 0;

  void ensure(index_t n);
};

/// x solving L x = y with the implicit unit diagonal; accumulation over the
/// strict-lower entries in ascending column order.
DenseVector lower_solve(const NumericFactors& factors, const DenseVector& y,
                        const ExecPolicy& exec = {});

/// x solving U x = y, rows processed in descending order. Throws
/// ZeroPivotError on an exactly zero diagonal.
DenseVector upper_solve(const NumericFactors& factors, const DenseVector& y,
                        const ExecPolicy& exec = {});

/// Full composition mapping an original right-hand side to an original
/// solution: x = D_c Q P^T U^-1 L^-1 P D_r b, with every stage an identity
/// when disabled at analysis time. No allocation after the first call at a
/// given size.
void solve_system(const NumericFactors& factors, const DenseVector& b, SolveWorkspace& ws,
                  DenseVector& x, const ExecPolicy& exec = {});

DenseVector solve_system(const NumericFactors& factors, const DenseVector& b, SolveWorkspace& ws,
                         const ExecPolicy& exec = {});

}  // namespace rlu
