#include "rlu/refine.hpp"

#include <algorithm>
#include <cmath>

namespace rlu {

Cgs2Result cgs2_orthonormalize(const std::vector<DenseVector>& basis, const DenseVector& v) {
  Cgs2Result res;
  res.coefficients.assign(basis.size(), 0.0);
  res.vector = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double h = dot(basis[j], res.vector);
      res.coefficients[j] += h;
      axpy(-h, basis[j], res.vector);
    }
  }
  res.norm = norm2(res.vector);
  if (res.norm <= 1e-300) {
    res.breakdown = true;
    return res;
  }
  for (double& e : res.vector) e /= res.norm;
  return res;
}

namespace {

double true_relres(const LinearOperator& A, const DenseVector& b, const DenseVector& x,
                   double bnorm, DenseVector& scratch) {
  A(x, scratch);
  for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] = b[i] - scratch[i];
  return norm2(scratch) / bnorm;
}

}  // namespace

RefineOutcome fgmres_refine(const LinearOperator& A, const DenseVector& b, const DenseVector& x0,
                            const LinearOperator& precond, const RefineConfig& config) {
  const std::size_t n = b.size();
  const int m = std::max(1, config.max_iterations);
  const double bn = norm2(b);
  const double bnorm = bn > 0.0 ? bn : 1.0;

  RefineOutcome out;
  out.x = x0;

  DenseVector r(n);
  A(x0, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double beta = norm2(r);
  double best_res = beta / bnorm;
  out.residual_history.push_back(best_res);
  if (best_res <= config.tolerance) {
    out.converged = true;
    return out;
  }

  std::vector<DenseVector> V;  // orthonormal Krylov basis
  std::vector<DenseVector> Z;  // preconditioned vectors (flexible variant)
  V.reserve(m + 1);
  Z.reserve(m);
  {
    DenseVector v0 = r;
    for (double& e : v0) e /= beta;
    V.push_back(std::move(v0));
  }

  // Column-major Hessenberg after Givens rotations, plus the rotated rhs g.
  std::vector<DenseVector> H;
  DenseVector g(static_cast<std::size_t>(m) + 1, 0.0);
  DenseVector cs(m, 0.0), sn(m, 0.0);
  g[0] = beta;

  DenseVector w(n), scratch(n), candidate(n);
  double accept_below = config.tolerance * bnorm;

  for (int i = 0; i < m; ++i) {
    Z.emplace_back(n);
    precond(V[i], Z[i]);
    A(Z[i], w);

    Cgs2Result arn = cgs2_orthonormalize(V, w);
    DenseVector hcol = std::move(arn.coefficients);
    hcol.push_back(arn.breakdown ? 0.0 : arn.norm);
    if (!arn.breakdown) V.push_back(std::move(arn.vector));

    for (int k = 0; k < i; ++k) {
      const double t = hcol[k];
      hcol[k] = cs[k] * t + sn[k] * hcol[k + 1];
      hcol[k + 1] = -sn[k] * t + cs[k] * hcol[k + 1];
    }
    const double hii = hcol[i], hsub = hcol[i + 1];
    const double gam = std::hypot(hii, hsub);
    if (gam == 0.0) {
      cs[i] = 1.0;
      sn[i] = 0.0;
    } else {
      cs[i] = hii / gam;
      sn[i] = hsub / gam;
    }
    hcol[i] = gam;
    hcol[i + 1] = 0.0;
    const double gi = g[i];
    g[i] = cs[i] * gi;
    g[i + 1] = -sn[i] * gi;
    H.push_back(std::move(hcol));

    out.iterations = i + 1;
    const double estimate = std::fabs(g[i + 1]);
    out.residual_history.push_back(estimate / bnorm);

    const bool last = arn.breakdown || i == m - 1;
    if (estimate <= accept_below || last) {
      // Assemble the minimum-residual iterate over the current subspace.
      DenseVector y(out.iterations);
      for (int row = out.iterations - 1; row >= 0; --row) {
        double t = g[row];
        for (int col = row + 1; col < out.iterations; ++col) t -= H[col][row] * y[col];
        y[row] = t / H[row][row];
      }
      candidate = x0;
      for (int col = 0; col < out.iterations; ++col) axpy(y[col], Z[col], candidate);

      const double res = true_relres(A, b, candidate, bnorm, scratch);
      if (res < best_res) {
        best_res = res;
        out.x = candidate;
      }
      if (best_res <= config.tolerance) {
        out.converged = true;
        return out;
      }
      if (last) return out;
      // The Arnoldi estimate drifted from the true residual; demand more
      // progress before forming the next candidate.
      accept_below = estimate * 0.5;
    }
  }
  return out;
}

RefineOutcome fgmres_refine(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                            const LinearOperator& precond, const RefineConfig& config) {
  LinearOperator op = [&A](const DenseVector& in, DenseVector& out) { out = spmv(A, in); };
  return fgmres_refine(op, b, x0, precond, config);
}

RefineOutcome classic_refine(const CsrMatrix& A, const DenseVector& b, const DenseVector& x0,
                             const LinearOperator& precond, const RefineConfig& config) {
  const std::size_t n = b.size();
  const double bn = norm2(b);
  const double bnorm = bn > 0.0 ? bn : 1.0;

  RefineOutcome out;
  out.x = x0;
  DenseVector x = x0, r(n), d(n);

  double best_res = relative_residual(A, x0, b);
  out.residual_history.push_back(best_res);
  if (best_res <= config.tolerance) {
    out.converged = true;
    return out;
  }

  for (int it = 0; it < config.max_iterations; ++it) {
    r = spmv(A, x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    precond(r, d);
    axpy(1.0, d, x);
    out.iterations = it + 1;

    r = spmv(A, x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double res = norm2(r) / bnorm;
    out.residual_history.push_back(res);
    if (res < best_res) {
      best_res = res;
      out.x = x;
    }
    if (best_res <= config.tolerance) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace rlu
