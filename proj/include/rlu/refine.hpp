#pragma once

#include <functional>
#include <vector>

#include "rlu/sparse.hpp"

namespace rlu {

/// out = op(in); `out` is sized by the caller.
using LinearOperator = std::function<void(const DenseVector& in, DenseVector& out)>;

struct RefineConfig {
  int max_iterations = 20;
  double tolerance = 1e-14;  // relative residual target
  bool enabled = true;
};

struct RefineOutcome {
  DenseVector x;
  int iterations = 0;
  std::vector<double> residual_history;  // ||b - A x^(i)||_2 / ||b||_2 per iterate
  bool converged = false;
};

struct Cgs2Result {
  DenseVector coefficients;  // combined projection coefficients, one per basis vector
  DenseVector vector;        // normalized remainder (unspecified on breakdown)
  double norm = 0.0;         // remainder norm before normalization
  bool breakdown = false;    // v lies in span(basis): happy breakdown
};

/// Two full classical Gram-Schmidt passes against an orthonormal basis, then
/// normalization. Breakdown when the post-projection norm is at most 1e-300.
Cgs2Result cgs2_orthonormalize(const std::vector<DenseVector>& basis, const DenseVector& v);

/// Right-preconditioned flexible GMRES without restart (Krylov dimension at
/// most max_iterations), starting from x0 and storing the preconditioned
/// vectors. Stops when the true relative residual of the original system
/// meets the tolerance; always returns the best iterate seen, so the result
/// never has a larger residual than x0. Non-convergence is reported through
/// converged=false, never an error.
RefineOutcome fgmres_refine(const LinearOperator& A, const DenseVector& b, const DenseVector& x0,
                            const LinearOperator& precond, const RefineConfig& config);

RefineOutcome fgmres_refine(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                            const LinearOperator& precond, const RefineConfig& config);

/// Classic residual-correction refinement (solve M d = r, x += d), the
/// Krylov-dimension-1 counterpart kept for comparison runs.
RefineOutcome classic_refine(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                             const LinearOperator& precond, const RefineConfig& config);

}  // namespace rlu
