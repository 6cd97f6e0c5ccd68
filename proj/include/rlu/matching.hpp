#pragma once

#include "rlu/sparse.hpp"

namespace rlu {

/// Product of a maximum-product bipartite matching run: the column permutation
/// placing matched entries on the diagonal (row i is matched to original
/// column col_perm.inverse[i]) and the dual-derived equilibration scalings.
/// After applying scaling and column permutation, every diagonal entry has
/// magnitude 1 and every off-diagonal entry magnitude at most 1 (to roundoff).
struct MatchingResult {
  Permutation col_perm;
  DiagonalScaling scaling;
  double matched_product = 0.0;  // sum of log|a| over matched entries
};

/// Maximum-product matching with equilibration (Duff–Koster style): maximizes
/// prod |a_{i,sigma(i)}| via the log-cost transform and shortest augmenting
/// paths with dual potentials. Entries stored as exact zeros are not matching
/// candidates. Throws StructurallySingularError when no perfect matching
/// exists.
MatchingResult mc64_scale(const CsrMatrix& A);

}  // namespace rlu
