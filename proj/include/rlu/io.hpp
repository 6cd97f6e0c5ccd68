#pragma once

#include <string>

#include "rlu/sparse.hpp"

namespace rlu {

/// Reads a Matrix Market coordinate/real file (general or symmetric).
/// Symmetric storage is expanded to general, duplicates are summed, indices
/// are converted to 0-based. Errors carry the offending line number.
CooMatrix mm_read(const std::string& path);

/// Writes CSR as Matrix Market coordinate/real/general with full-precision
/// values, so mm_read(mm_write(A)) reproduces A exactly.
void mm_write(const CsrMatrix& A, const std::string& path);

}  // namespace rlu
