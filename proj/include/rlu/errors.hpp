#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlu {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// No perfect matching exists; `deficient_rows` is a row set whose combined
/// column support is too small (a Hall violator).
class StructurallySingularError : public Error {
 public:
  StructurallySingularError(const std::string& msg, std::vector<std::int64_t> rows)
      : Error(msg), deficient_rows(std::move(rows)) {}
  std::vector<std::int64_t> deficient_rows;
};

/// The matrix handed to symbolic analysis has no stored diagonal entry in `row`.
class ZeroDiagonalError : public Error {
 public:
  ZeroDiagonalError(const std::string& msg, std::int64_t r) : Error(msg), row(r) {}
  std::int64_t row;
};

/// |u_rr| fell at or below the pivot floor during numeric factorization.
class ZeroPivotError : public Error {
 public:
  ZeroPivotError(const std::string& msg, std::int64_t r) : Error(msg), row(r) {}
  std::int64_t row;
};

/// The sparsity pattern differs from the one captured at analysis time; the
/// caller must rerun symbolic analysis before factorizing this matrix.
class PatternMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlu
