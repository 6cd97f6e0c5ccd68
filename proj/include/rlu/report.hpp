#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rlu/sparse.hpp"

namespace rlu {

/// Per-system phase breakdown of a sequence run. analyze_ms is nonzero only
/// for systems that triggered a (re)analysis.
struct SystemRecord {
  index_t k = 0;
  index_t n = 0;
  index_t nnz = 0;
  double analyze_ms = 0.0;
  double scatter_ms = 0.0;
  double factor_ms = 0.0;
  double trisolve_ms = 0.0;
  double refine_ms = 0.0;
  int refine_iters = 0;
  double relres_direct = 0.0;
  double relres_final = 0.0;
  std::string status = "ok";
};

struct SolveReport {
  std::vector<SystemRecord> systems;
  double total_ms = 0.0;
  double mean_analyze_ms = 0.0;
  double mean_scatter_ms = 0.0;
  double mean_factor_ms = 0.0;
  double mean_trisolve_ms = 0.0;
  double mean_refine_ms = 0.0;
  index_t systems_solved = 0;
  index_t reanalysis_count = 0;

  void finalize();  // fills the aggregate fields from the records
};

std::string report_to_json(const SolveReport& report);
SolveReport report_from_json(const std::string& text);

/// One data row per system after a header; the aggregate block follows as
/// '#'-prefixed comment lines.
std::string report_to_csv(const SolveReport& report);

}  // namespace rlu
