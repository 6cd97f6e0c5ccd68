#pragma once

#include "rlu/sparse.hpp"

namespace rlu {

/// Fill-reducing elimination order by quotient-graph approximate minimum
/// degree: repeatedly eliminate the vertex of minimum approximate external
/// degree (lowest index on ties), absorb its adjacent elements into the new
/// element, and update the approximate degrees of its neighbors.
///
/// `pattern` must be structurally symmetric (see symmetrized_pattern);
/// diagonal entries are ignored. Deterministic: identical input gives an
/// identical permutation. Returns forward[v] = elimination position of v.
Permutation amd_order(const CsrMatrix& pattern);

}  // namespace rlu
