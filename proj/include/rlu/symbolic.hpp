#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlu/matching.hpp"
#include "rlu/sparse.hpp"

namespace rlu {

/// Per-row column-to-offset lookup over a fixed pattern. Short-span rows use
/// a bitmap with rank counts, wide sparse rows an open-addressing hash table.
class RowLookupTable {
 public:
  enum class Variant : std::uint8_t { bitmap, hash };

  void build(const CsrMatrix& pattern);

  /// Offset of column `col` within row `row` (0-based within the row),
  /// or -1 when the column is absent.
  index_t lookup(index_t row, index_t col) const;

  Variant variant(index_t row) const { return rows_[row].variant; }

 private:
  struct RowInfo {
    Variant variant = Variant::bitmap;
    index_t base = 0;   // bitmap: lowest column; hash: table mask
    index_t start = 0;  // offset into the shared pool
    index_t len = 0;    // bitmap: word count; hash: slot count
  };
  std::vector<RowInfo> rows_;
  std::vector<std::uint64_t> words_;  // bitmap words
  std::vector<index_t> ranks_;        // set-bit count before each word
  std::vector<index_t> hash_keys_;    // -1 = empty slot
  std::vector<index_t> hash_vals_;
};

/// Threshold rule shared with the tests: bitmap when the column span fits in
/// 64 words per stored entry.
bool row_lookup_prefers_bitmap(index_t min_col, index_t max_col, index_t row_nnz);

/// Everything reusable across a fixed-pattern sequence: the combined L+U fill
/// pattern of the transformed matrix B = P * (D_r A D_c Q) * P^T, the
/// permutations and scalings defining the transform, and the lookup/scatter
/// structures feeding the numeric phase.
struct SymbolicFactors {
  index_t n = 0;
  CsrMatrix combined_pattern;           // strict lower = L, diagonal + upper = U
  std::vector<index_t> diag_pos;        // global offset of each diagonal entry
  RowLookupTable row_lookup;
  std::optional<MatchingResult> match;  // absent when scaling is disabled
  Permutation amd;                      // identity when ordering is disabled
  CsrMatrix source_pattern;             // pattern of the original A
  std::vector<index_t> scatter_map;     // source entry -> combined slot
  std::vector<double> scatter_scale;    // D_r[i] * D_c[j] per source entry
  index_t fill_count = 0;               // entries added beyond the pattern of B
};

/// Fill pattern of the combined L+U factors of B by row-by-row (up-looking)
/// closure: row i merges the upper part of every row d < i it references,
/// in ascending d. Requires a structurally nonzero diagonal; throws
/// ZeroDiagonalError naming the first offending row.
CsrMatrix fill1_pattern(const CsrMatrix& B_pattern);

struct AnalyzeOptions {
  bool use_scaling = true;  // MC64 equilibration + column matching
  bool use_amd = true;      // AMD on the symmetrized pattern
};

/// One-time analysis: (optional) matching/scaling, (optional) AMD ordering,
/// fill pattern, lookups and the scatter map. Single-threaded; the result is
/// immutable and safe to share across concurrent factorizations.
SymbolicFactors symbolic_analyze(const CsrMatrix& A, const AnalyzeOptions& options = {});

}  // namespace rlu
