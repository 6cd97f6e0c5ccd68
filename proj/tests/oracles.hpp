// Independent reference implementations used to generate and check expected
// values. Everything here is deliberately brute force and kept apart from the
// library code paths it validates.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "rlu/sparse.hpp"

namespace oracle {

using rlu::CooMatrix;
using rlu::CsrMatrix;
using rlu::DenseVector;
using rlu::index_t;

using Dense = std::vector<std::vector<double>>;

inline Dense dense_from_csr(const CsrMatrix& A) {
  Dense M(A.nrows, std::vector<double>(A.ncols, 0.0));
  for (index_t i = 0; i < A.nrows; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      M[i][A.col_indices[k]] = A.has_values() ? A.values[k] : 1.0;
    }
  }
  return M;
}

// LU without pivoting; returns false on an exactly zero pivot. L has a unit
// diagonal stored implicitly (strict lower part of the output).
inline bool dense_lu_nopivot(Dense& M) {
  const std::size_t n = M.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (M[k][k] == 0.0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double alpha = M[i][k] / M[k][k];
      M[i][k] = alpha;
      for (std::size_t j = k + 1; j < n; ++j) M[i][j] -= alpha * M[k][j];
    }
  }
  return true;
}

// Solves M x = b by Gaussian elimination with partial pivoting.
inline DenseVector dense_solve(Dense M, DenseVector b) {
  const std::size_t n = M.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(M[i][k]) > std::fabs(M[piv][k])) piv = i;
    }
    std::swap(M[k], M[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double alpha = M[i][k] / M[k][k];
      for (std::size_t j = k; j < n; ++j) M[i][j] -= alpha * M[k][j];
      b[i] -= alpha * b[k];
    }
  }
  DenseVector x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= M[i][j] * x[j];
    x[i] = acc / M[i][i];
  }
  return x;
}

inline Dense dense_inverse(const Dense& M) {
  const std::size_t n = M.size();
  Dense inv(n, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < n; ++c) {
    DenseVector e(n, 0.0);
    e[c] = 1.0;
    const DenseVector col = dense_solve(M, e);
    for (std::size_t i = 0; i < n; ++i) inv[i][c] = col[i];
  }
  return inv;
}

inline double norm1(const Dense& M) {
  double best = 0.0;
  for (std::size_t c = 0; c < M.size(); ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < M.size(); ++i) sum += std::fabs(M[i][c]);
    best = std::max(best, sum);
  }
  return best;
}

inline double condition_1norm(const Dense& M) { return norm1(M) * norm1(dense_inverse(M)); }

using Pattern = std::vector<std::vector<char>>;  // dense boolean adjacency

inline Pattern pattern_from_csr(const CsrMatrix& A) {
  Pattern P(A.nrows, std::vector<char>(A.ncols, 0));
  for (index_t i = 0; i < A.nrows; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      P[i][A.col_indices[k]] = 1;
    }
  }
  return P;
}

// Symbolic Gaussian elimination in natural order: eliminating variable k adds
// row k's trailing pattern to every later row that references column k. No
// numerical cancellation.
inline Pattern symbolic_elimination_fill(Pattern P) {
  const std::size_t n = P.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i) {
      if (!P[i][k]) continue;
      for (std::size_t j = k + 1; j < n; ++j) {
        if (P[k][j]) P[i][j] = 1;
      }
    }
  }
  return P;
}

inline index_t count_true(const Pattern& P) {
  index_t c = 0;
  for (const auto& row : P) {
    for (char v : row) c += v != 0;
  }
  return c;
}

// Fill-in (new entries) of eliminating a symmetric pattern in the given
// order; `order[k]` is the vertex eliminated at step k.
inline index_t fill_in_for_order(const Pattern& sym_pattern, const std::vector<index_t>& order) {
  const std::size_t n = sym_pattern.size();
  Pattern P(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && sym_pattern[order[i]][order[j]]) P[i][j] = 1;
    }
  }
  index_t fill = 0;
  std::vector<char> alive(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> nbrs;
    for (std::size_t j = k + 1; j < n; ++j) {
      if (P[k][j]) nbrs.push_back(j);
    }
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        if (!P[nbrs[a]][nbrs[b]]) {
          P[nbrs[a]][nbrs[b]] = P[nbrs[b]][nbrs[a]] = 1;
          ++fill;
        }
      }
    }
  }
  return fill;
}

// Best product of |a_{i,perm(i)}| over all n! permutations; 0 if none is
// structurally complete. n <= ~9 expected.
inline double best_matching_product(const Dense& M) {
  const std::size_t n = M.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = 0.0;
  do {
    double prod = 1.0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const double a = std::fabs(M[i][perm[i]]);
      if (a == 0.0) ok = false;
      prod *= a;
    }
    if (ok) best = std::max(best, prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// --- random instance generators (seeded, deterministic) ---

// Random sparse matrix with a full nonzero diagonal and about extra_per_row
// off-diagonal entries; values uniform in [lo, hi] with random signs.
inline CsrMatrix random_sparse(std::mt19937_64& rng, index_t n, index_t extra_per_row, double lo,
                               double hi, bool diagonally_dominant) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_int_distribution<index_t> col(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  CooMatrix coo;
  coo.nrows = n;
  coo.ncols = n;
  for (index_t i = 0; i < n; ++i) {
    for (index_t e = 0; e < extra_per_row; ++e) {
      const index_t j = col(rng);
      if (j != i) coo.entries.push_back({i, j, (coin(rng) ? 1.0 : -1.0) * mag(rng)});
    }
  }
  coo.canonicalize();
  std::vector<double> rowsum(n, 0.0);
  for (const auto& e : coo.entries) rowsum[e.row] += std::fabs(e.value);
  for (index_t i = 0; i < n; ++i) {
    const double d = diagonally_dominant ? rowsum[i] + 1.0 + mag(rng)
                                         : (coin(rng) ? 1.0 : -1.0) * mag(rng);
    coo.entries.push_back({i, i, d});
  }
  coo.canonicalize();
  return rlu::coo_to_csr(coo);
}

inline DenseVector random_vector(std::mt19937_64& rng, index_t n, double lo = -1.0,
                                 double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  DenseVector v(n);
  for (double& e : v) e = u(rng);
  return v;
}

}  // namespace oracle
