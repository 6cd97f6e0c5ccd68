#include "rlu/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rlu {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& path, long line, const std::string& what) {
  throw IoError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

CooMatrix mm_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) fail(path, 1, "empty file, expected Matrix Market banner");
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket") fail(path, lineno, "malformed banner: " + line);
  if (lower(object) != "matrix") fail(path, lineno, "unsupported object: " + object);
  if (lower(format) != "coordinate") fail(path, lineno, "unsupported format: " + format);
  if (lower(field) != "real") fail(path, lineno, "unsupported field: " + field);
  const std::string sym = lower(symmetry);
  if (sym != "general" && sym != "symmetric") fail(path, lineno, "unsupported symmetry: " + symmetry);

  // Size line, after any comment lines.
  index_t nrows = 0, ncols = 0, nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) fail(path, lineno + 1, "missing size line");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream sz(line);
    if (!(sz >> nrows >> ncols >> nnz)) fail(path, lineno, "malformed size line: " + line);
    break;
  }
  if (nrows < 0 || ncols < 0 || nnz < 0) fail(path, lineno, "negative size");

  CooMatrix coo;
  coo.nrows = nrows;
  coo.ncols = ncols;
  coo.entries.reserve(static_cast<std::size_t>(sym == "symmetric" ? 2 * nnz : nnz));

  index_t seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) {
      fail(path, lineno + 1, "unexpected end of file, expected " + std::to_string(nnz) +
                                 " entries, got " + std::to_string(seen));
    }
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream es(line);
    index_t r = 0, c = 0;
    double v = 0.0;
    if (!(es >> r >> c >> v)) fail(path, lineno, "malformed entry: " + line);
    if (r < 1 || r > nrows || c < 1 || c > ncols) {
      fail(path, lineno, "index (" + std::to_string(r) + ", " + std::to_string(c) +
                             ") out of range for " + std::to_string(nrows) + " x " +
                             std::to_string(ncols));
    }
    coo.entries.push_back({r - 1, c - 1, v});
    if (sym == "symmetric" && r != c) coo.entries.push_back({c - 1, r - 1, v});
    ++seen;
  }

  coo.canonicalize();
  return coo;
}

void mm_write(const CsrMatrix& A, const std::string& path) {
  A.check_structure();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.nrows << " " << A.ncols << " " << A.nnz() << "\n";
  char buf[64];
  for (index_t i = 0; i < A.nrows; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const double v = A.has_values() ? A.values[k] : 0.0;
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << (i + 1) << " " << (A.col_indices[k] + 1) << " " << buf << "\n";
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace rlu
