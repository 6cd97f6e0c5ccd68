#include "rlu/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlu {

void CooMatrix::canonicalize() {
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= nrows || e.col < 0 || e.col >= ncols) {
      throw Error("COO entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                  ") out of range for " + std::to_string(nrows) + " x " + std::to_string(ncols));
    }
  }
  // Stable sort keeps duplicates in insertion order, so their sum is
  // reproducible and mirrored pushes in symmetric assembly stay bitwise equal.
  std::stable_sort(entries.begin(), entries.end(), [](const CooEntry& a, const CooEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::size_t out = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (out > 0 && entries[out - 1].row == entries[k].row &&
        entries[out - 1].col == entries[k].col) {
      entries[out - 1].value += entries[k].value;
    } else {
      entries[out++] = entries[k];
    }
  }
  entries.resize(out);
}

index_t CsrMatrix::find(index_t i, index_t j) const {
  const auto begin = col_indices.begin() + row_offsets[i];
  const auto end = col_indices.begin() + row_offsets[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return it - col_indices.begin();
}

void CsrMatrix::check_structure() const {
  if (nrows < 0 || ncols < 0) throw Error("negative matrix dimension");
  if (static_cast<index_t>(row_offsets.size()) != nrows + 1) {
    throw Error("row_offsets length must be nrows + 1");
  }
  if (row_offsets[0] != 0) throw Error("row_offsets[0] must be 0");
  for (index_t i = 0; i < nrows; ++i) {
    if (row_offsets[i + 1] < row_offsets[i]) {
      throw Error("row_offsets not monotone at row " + std::to_string(i));
    }
    for (index_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] < 0 || col_indices[k] >= ncols) {
        throw Error("column index out of range in row " + std::to_string(i));
      }
      if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1]) {
        throw Error("column indices not strictly increasing in row " + std::to_string(i));
      }
    }
  }
  if (static_cast<index_t>(col_indices.size()) != row_offsets[nrows]) {
    throw Error("col_indices length disagrees with row_offsets");
  }
  if (!values.empty() && values.size() != col_indices.size()) {
    throw Error("values length disagrees with col_indices");
  }
}

Permutation Permutation::identity(index_t n) {
  Permutation p;
  p.forward.resize(n);
  p.inverse.resize(n);
  std::iota(p.forward.begin(), p.forward.end(), index_t{0});
  std::iota(p.inverse.begin(), p.inverse.end(), index_t{0});
  return p;
}

Permutation Permutation::from_forward(std::vector<index_t> fwd) {
  const index_t n = static_cast<index_t>(fwd.size());
  Permutation p;
  p.forward = std::move(fwd);
  p.inverse.assign(n, -1);
  for (index_t i = 0; i < n; ++i) {
    const index_t d = p.forward[i];
    if (d < 0 || d >= n || p.inverse[d] != -1) {
      throw Error("forward map is not a bijection on 0.." + std::to_string(n - 1));
    }
    p.inverse[d] = i;
  }
  return p;
}

DiagonalScaling DiagonalScaling::ones(index_t n) {
  DiagonalScaling s;
  s.row_scale.assign(n, 1.0);
  s.col_scale.assign(n, 1.0);
  return s;
}

void DiagonalScaling::validate() const {
  for (double v : row_scale) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("nonpositive or non-finite row scale");
  }
  for (double v : col_scale) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("nonpositive or non-finite column scale");
  }
}

CsrMatrix coo_to_csr(const CooMatrix& coo) {
  CsrMatrix A;
  A.nrows = coo.nrows;
  A.ncols = coo.ncols;
  A.row_offsets.assign(coo.nrows + 1, 0);
  A.col_indices.resize(coo.entries.size());
  A.values.resize(coo.entries.size());
  for (const auto& e : coo.entries) A.row_offsets[e.row + 1]++;
  for (index_t i = 0; i < coo.nrows; ++i) A.row_offsets[i + 1] += A.row_offsets[i];
  // Canonical COO is already (row, col) sorted, so a single pass fills CSR.
  std::vector<index_t> next(A.row_offsets.begin(), A.row_offsets.end() - 1);
  for (const auto& e : coo.entries) {
    const index_t k = next[e.row]++;
    A.col_indices[k] = e.col;
    A.values[k] = e.value;
  }
  A.check_structure();
  return A;
}

DenseVector spmv(const CsrMatrix& A, const DenseVector& x) {
  if (static_cast<index_t>(x.size()) != A.ncols) {
    throw DimensionError("spmv: x has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(A.ncols));
  }
  if (!A.has_values()) throw Error("spmv: matrix has no values");
  DenseVector y(A.nrows, 0.0);
  for (index_t i = 0; i < A.nrows; ++i) {
    double acc = 0.0;
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      acc += A.values[k] * x[A.col_indices[k]];
    }
    y[i] = acc;
  }
  return y;
}

namespace {

// Shared row-rebuild for the two permutation ops: entry (i, j, v) of A lands
// at (row_map[i], col_map[j], v); each output row is then sorted by column.
CsrMatrix remap_entries(const CsrMatrix& A, const std::vector<index_t>& row_map,
                        const std::vector<index_t>& col_map) {
  const bool with_values = A.has_values() && !A.values.empty();
  CsrMatrix B;
  B.nrows = A.nrows;
  B.ncols = A.ncols;
  B.row_offsets.assign(A.nrows + 1, 0);
  B.col_indices.resize(A.col_indices.size());
  if (with_values) B.values.resize(A.values.size());

  for (index_t i = 0; i < A.nrows; ++i) {
    B.row_offsets[row_map[i] + 1] += A.row_offsets[i + 1] - A.row_offsets[i];
  }
  for (index_t i = 0; i < A.nrows; ++i) B.row_offsets[i + 1] += B.row_offsets[i];

  std::vector<index_t> next(B.row_offsets.begin(), B.row_offsets.end() - 1);
  for (index_t i = 0; i < A.nrows; ++i) {
    const index_t r = row_map[i];
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const index_t pos = next[r]++;
      B.col_indices[pos] = col_map[A.col_indices[k]];
      if (with_values) B.values[pos] = A.values[k];
    }
  }

  std::vector<index_t> order;
  for (index_t i = 0; i < B.nrows; ++i) {
    const index_t lo = B.row_offsets[i], hi = B.row_offsets[i + 1];
    order.resize(hi - lo);
    std::iota(order.begin(), order.end(), index_t{0});
    std::sort(order.begin(), order.end(), [&](index_t a, index_t b) {
      return B.col_indices[lo + a] < B.col_indices[lo + b];
    });
    std::vector<index_t> cols(hi - lo);
    std::vector<double> vals(with_values ? hi - lo : 0);
    for (index_t t = 0; t < hi - lo; ++t) {
      cols[t] = B.col_indices[lo + order[t]];
      if (with_values) vals[t] = B.values[lo + order[t]];
    }
    std::copy(cols.begin(), cols.end(), B.col_indices.begin() + lo);
    if (with_values) std::copy(vals.begin(), vals.end(), B.values.begin() + lo);
  }
  B.check_structure();
  return B;
}

}  // namespace

CsrMatrix permute_symmetric(const CsrMatrix& A, const Permutation& p) {
  if (A.nrows != A.ncols) throw DimensionError("permute_symmetric: matrix must be square");
  if (p.size() != A.nrows) throw DimensionError("permute_symmetric: permutation size mismatch");
  return remap_entries(A, p.forward, p.forward);
}

CsrMatrix permute_columns(const CsrMatrix& A, const Permutation& q) {
  if (q.size() != A.ncols) throw DimensionError("permute_columns: permutation size mismatch");
  std::vector<index_t> row_id(A.nrows);
  std::iota(row_id.begin(), row_id.end(), index_t{0});
  return remap_entries(A, row_id, q.forward);
}

CsrMatrix apply_scaling(const CsrMatrix& A, const DiagonalScaling& s) {
  if (static_cast<index_t>(s.row_scale.size()) != A.nrows ||
      static_cast<index_t>(s.col_scale.size()) != A.ncols) {
    throw DimensionError("apply_scaling: scaling size mismatch");
  }
  s.validate();
  if (!A.has_values()) throw Error("apply_scaling: matrix has no values");
  CsrMatrix B = A;
  for (index_t i = 0; i < A.nrows; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      B.values[k] = s.row_scale[i] * A.values[k] * s.col_scale[A.col_indices[k]];
    }
  }
  return B;
}

bool pattern_equal(const CsrMatrix& a, const CsrMatrix& b) {
  return a.nrows == b.nrows && a.ncols == b.ncols && a.row_offsets == b.row_offsets &&
         a.col_indices == b.col_indices;
}

CsrMatrix symmetrized_pattern(const CsrMatrix& A) {
  if (A.nrows != A.ncols) throw DimensionError("symmetrized_pattern: matrix must be square");
  const index_t n = A.nrows;
  // Column counts of A give the row counts of A^T.
  std::vector<index_t> tr_offsets(n + 1, 0);
  for (index_t c : A.col_indices) tr_offsets[c + 1]++;
  for (index_t i = 0; i < n; ++i) tr_offsets[i + 1] += tr_offsets[i];
  std::vector<index_t> tr_cols(A.col_indices.size());
  std::vector<index_t> next(tr_offsets.begin(), tr_offsets.end() - 1);
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      tr_cols[next[A.col_indices[k]]++] = i;  // transpose rows come out sorted
    }
  }
  CsrMatrix S;
  S.nrows = n;
  S.ncols = n;
  S.row_offsets.assign(n + 1, 0);
  S.col_indices.reserve(2 * A.col_indices.size());
  for (index_t i = 0; i < n; ++i) {
    index_t ka = A.row_offsets[i];
    index_t kt = tr_offsets[i];
    const index_t ea = A.row_offsets[i + 1], et = tr_offsets[i + 1];
    while (ka < ea || kt < et) {
      index_t c;
      if (ka < ea && (kt >= et || A.col_indices[ka] <= tr_cols[kt])) {
        c = A.col_indices[ka];
        if (kt < et && tr_cols[kt] == c) ++kt;
        ++ka;
      } else {
        c = tr_cols[kt++];
      }
      S.col_indices.push_back(c);
    }
    S.row_offsets[i + 1] = static_cast<index_t>(S.col_indices.size());
  }
  S.check_structure();
  return S;
}

double dot(const DenseVector& a, const DenseVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double relative_residual(const CsrMatrix& A, const DenseVector& x, const DenseVector& b) {
  DenseVector r = spmv(A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double bn = norm2(b);
  return norm2(r) / (bn > 0.0 ? bn : 1.0);
}

}  // namespace rlu
