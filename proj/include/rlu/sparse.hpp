#pragma once

#include <cstdint>
#include <vector>

#include "rlu/errors.hpp"

namespace rlu {

using index_t = std::int64_t;
using DenseVector = std::vector<double>;

struct CooEntry {
  index_t row;
  index_t col;
  double value;
};

/// Triplet storage used as the assembly/ingestion carrier. Canonical form is
/// sorted by (row, col) with duplicates summed.
struct CooMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<CooEntry> entries;

  /// Sorts entries and sums duplicates in place. Throws on out-of-range indices.
  void canonicalize();
};

/// Compressed sparse row storage. `values` may be empty for pattern-only use.
struct CsrMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> row_offsets;  // length nrows + 1, nondecreasing
  std::vector<index_t> col_indices;  // strictly increasing within each row
  std::vector<double> values;        // empty, or same length as col_indices

  index_t nnz() const { return row_offsets.empty() ? 0 : row_offsets.back(); }
  bool has_values() const { return values.size() == col_indices.size(); }

  /// Offset of entry (i, j), or -1 when absent. Binary search within the row.
  index_t find(index_t i, index_t j) const;

  /// Validates the CSR invariants (monotone offsets, sorted unique columns,
  /// indices in range). Throws Error on the first violation.
  void check_structure() const;
};

struct Permutation {
  std::vector<index_t> forward;  // forward[i] = destination of i
  std::vector<index_t> inverse;  // inverse[forward[i]] = i

  index_t size() const { return static_cast<index_t>(forward.size()); }

  static Permutation identity(index_t n);
  /// Builds a permutation from its forward map; throws if not a bijection.
  static Permutation from_forward(std::vector<index_t> fwd);
};

struct DiagonalScaling {
  DenseVector row_scale;
  DenseVector col_scale;

  static DiagonalScaling ones(index_t n);
  /// Throws unless every scale factor is strictly positive and finite.
  void validate() const;
};

CsrMatrix coo_to_csr(const CooMatrix& coo);

/// y = A * x with per-row left-to-right accumulation (deterministic).
DenseVector spmv(const CsrMatrix& A, const DenseVector& x);

/// B with B[p(i)][p(j)] = A[i][j]; rows re-sorted. Works on pattern-only input.
CsrMatrix permute_symmetric(const CsrMatrix& A, const Permutation& p);

/// B with B[i][q(j)] = A[i][j] for column map q; rows re-sorted.
CsrMatrix permute_columns(const CsrMatrix& A, const Permutation& q);

/// B = D_r * A * D_c.
CsrMatrix apply_scaling(const CsrMatrix& A, const DiagonalScaling& s);

/// True iff dimensions, row offsets and column indices are identical.
bool pattern_equal(const CsrMatrix& a, const CsrMatrix& b);

/// Pattern of A + A^T, values discarded.
CsrMatrix symmetrized_pattern(const CsrMatrix& A);

// Dense-vector helpers shared by the solve and refinement paths.
double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);
void axpy(double alpha, const DenseVector& x, DenseVector& y);  // y += alpha*x

/// ||b - A x||_2 / ||b||_2 (denominator clamped to 1 when b = 0).
double relative_residual(const CsrMatrix& A, const DenseVector& x, const DenseVector& b);

}  // namespace rlu
