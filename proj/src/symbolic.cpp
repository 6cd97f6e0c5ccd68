#include "rlu/symbolic.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <queue>

#include "rlu/ordering.hpp"

namespace rlu {

bool row_lookup_prefers_bitmap(index_t min_col, index_t max_col, index_t row_nnz) {
  return max_col - min_col + 1 <= 64 * row_nnz;
}

void RowLookupTable::build(const CsrMatrix& pattern) {
  const index_t n = pattern.nrows;
  rows_.assign(n, RowInfo{});
  words_.clear();
  ranks_.clear();
  hash_keys_.clear();
  hash_vals_.clear();

  for (index_t i = 0; i < n; ++i) {
    const index_t lo = pattern.row_offsets[i], hi = pattern.row_offsets[i + 1];
    const index_t nnz = hi - lo;
    RowInfo& info = rows_[i];
    if (nnz == 0) {
      info.variant = Variant::bitmap;
      info.len = 0;
      continue;
    }
    const index_t min_col = pattern.col_indices[lo];
    const index_t max_col = pattern.col_indices[hi - 1];
    if (row_lookup_prefers_bitmap(min_col, max_col, nnz)) {
      info.variant = Variant::bitmap;
      info.base = min_col;
      info.start = static_cast<index_t>(words_.size());
      info.len = (max_col - min_col) / 64 + 1;
      words_.resize(words_.size() + info.len, 0);
      ranks_.resize(ranks_.size() + info.len, 0);
      for (index_t k = lo; k < hi; ++k) {
        const index_t rel = pattern.col_indices[k] - min_col;
        words_[info.start + rel / 64] |= std::uint64_t{1} << (rel % 64);
      }
      index_t running = 0;
      for (index_t w = 0; w < info.len; ++w) {
        ranks_[info.start + w] = running;
        running += std::popcount(words_[info.start + w]);
      }
    } else {
      info.variant = Variant::hash;
      index_t slots = 4;
      while (slots < 2 * nnz) slots *= 2;
      info.base = slots - 1;  // mask
      info.start = static_cast<index_t>(hash_keys_.size());
      info.len = slots;
      hash_keys_.resize(hash_keys_.size() + slots, -1);
      hash_vals_.resize(hash_vals_.size() + slots, -1);
      for (index_t k = lo; k < hi; ++k) {
        const index_t col = pattern.col_indices[k];
        index_t slot = static_cast<index_t>(
            (static_cast<std::uint64_t>(col) * 0x9E3779B97F4A7C15ull) >> 32);
        slot &= info.base;
        while (hash_keys_[info.start + slot] != -1) slot = (slot + 1) & info.base;
        hash_keys_[info.start + slot] = col;
        hash_vals_[info.start + slot] = k - lo;
      }
    }
  }
}

index_t RowLookupTable::lookup(index_t row, index_t col) const {
  const RowInfo& info = rows_[row];
  if (info.len == 0) return -1;
  if (info.variant == Variant::bitmap) {
    const index_t rel = col - info.base;
    if (rel < 0 || rel / 64 >= info.len) return -1;
    const std::uint64_t word = words_[info.start + rel / 64];
    const std::uint64_t bit = std::uint64_t{1} << (rel % 64);
    if (!(word & bit)) return -1;
    return ranks_[info.start + rel / 64] + std::popcount(word & (bit - 1));
  }
  index_t slot =
      static_cast<index_t>((static_cast<std::uint64_t>(col) * 0x9E3779B97F4A7C15ull) >> 32);
  slot &= info.base;
  while (true) {
    const index_t key = hash_keys_[info.start + slot];
    if (key == col) return hash_vals_[info.start + slot];
    if (key == -1) return -1;
    slot = (slot + 1) & info.base;
  }
}

CsrMatrix fill1_pattern(const CsrMatrix& B) {
  if (B.nrows != B.ncols) throw DimensionError("fill1_pattern: matrix must be square");
  const index_t n = B.nrows;

  CsrMatrix F;
  F.nrows = n;
  F.ncols = n;
  F.row_offsets.assign(n + 1, 0);
  F.col_indices.reserve(B.col_indices.size());

  std::vector<index_t> diag_pos(n);
  std::vector<index_t> mark(n, -1);
  std::vector<index_t> upper;
  std::priority_queue<index_t, std::vector<index_t>, std::greater<index_t>> pending;
  std::vector<index_t> lower;

  for (index_t i = 0; i < n; ++i) {
    lower.clear();
    upper.clear();
    bool has_diag = false;
    for (index_t k = B.row_offsets[i]; k < B.row_offsets[i + 1]; ++k) {
      const index_t j = B.col_indices[k];
      mark[j] = i;
      if (j < i) {
        pending.push(j);
      } else {
        upper.push_back(j);
        has_diag |= (j == i);
      }
    }
    if (!has_diag) {
      throw ZeroDiagonalError("structurally zero diagonal at row " + std::to_string(i), i);
    }

    // Merge the upper part of each referenced row d in ascending d; merged
    // rows only introduce columns > d, so pops come out in ascending order.
    while (!pending.empty()) {
      const index_t d = pending.top();
      pending.pop();
      lower.push_back(d);
      for (index_t t = diag_pos[d] + 1; t < F.row_offsets[d + 1]; ++t) {
        const index_t j = F.col_indices[t];
        if (mark[j] == i) continue;
        mark[j] = i;
        if (j < i) {
          pending.push(j);
        } else {
          upper.push_back(j);
        }
      }
    }

    std::sort(upper.begin(), upper.end());
    F.col_indices.insert(F.col_indices.end(), lower.begin(), lower.end());
    diag_pos[i] = static_cast<index_t>(F.col_indices.size());  // upper starts at the diagonal
    F.col_indices.insert(F.col_indices.end(), upper.begin(), upper.end());
    F.row_offsets[i + 1] = static_cast<index_t>(F.col_indices.size());
  }
  return F;
}

SymbolicFactors symbolic_analyze(const CsrMatrix& A, const AnalyzeOptions& options) {
  if (A.nrows != A.ncols) throw DimensionError("symbolic_analyze: matrix must be square");
  A.check_structure();
  const index_t n = A.nrows;

  SymbolicFactors sf;
  sf.n = n;
  sf.source_pattern.nrows = A.nrows;
  sf.source_pattern.ncols = A.ncols;
  sf.source_pattern.row_offsets = A.row_offsets;
  sf.source_pattern.col_indices = A.col_indices;

  if (options.use_scaling) sf.match = mc64_scale(A);

  CsrMatrix permuted = options.use_scaling ? permute_columns(sf.source_pattern, sf.match->col_perm)
                                           : sf.source_pattern;

  sf.amd = options.use_amd ? amd_order(symmetrized_pattern(permuted)) : Permutation::identity(n);

  const CsrMatrix b_pattern = permute_symmetric(permuted, sf.amd);
  sf.combined_pattern = fill1_pattern(b_pattern);
  sf.fill_count = sf.combined_pattern.nnz() - b_pattern.nnz();

  sf.diag_pos.resize(n);
  for (index_t i = 0; i < n; ++i) sf.diag_pos[i] = sf.combined_pattern.find(i, i);

  sf.row_lookup.build(sf.combined_pattern);

  // Precompute where each source entry lands (and its scale factor) so the
  // per-system scatter is a single pass.
  sf.scatter_map.resize(A.col_indices.size());
  sf.scatter_scale.assign(A.col_indices.size(), 1.0);
  for (index_t i = 0; i < n; ++i) {
    const index_t r = sf.amd.forward[i];
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const index_t j = A.col_indices[k];
      const index_t jq = sf.match ? sf.match->col_perm.forward[j] : j;
      const index_t c = sf.amd.forward[jq];
      const index_t off = sf.row_lookup.lookup(r, c);
      assert(off >= 0 && "combined pattern must contain every source entry");
      sf.scatter_map[k] = sf.combined_pattern.row_offsets[r] + off;
      if (sf.match) {
        sf.scatter_scale[k] = sf.match->scaling.row_scale[i] * sf.match->scaling.col_scale[j];
      }
    }
  }
  return sf;
}

}  // namespace rlu
