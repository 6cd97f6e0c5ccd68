#pragma once

#include <string>

#include "rlu/kkt.hpp"
#include "rlu/report.hpp"
#include "rlu/schedule.hpp"

namespace rlu::cli {

enum class RefineMethod { none, fgmres, classic };

struct PipelineOptions {
  bool use_scaling = true;  // MC64 equilibration (off: KLU-style AMD-only path)
  bool use_amd = true;
  RefineMethod refine = RefineMethod::none;
  double refine_tol = 1e-14;
  int refine_maxit = 20;
  ExecPolicy exec;
  double pivot_floor = 1e-30;
  index_t break_pattern_at = -1;  // injects a pattern break at this index (testing aid)
};

/// Relative residual a system must reach for its record to count as solved.
inline constexpr double kAcceptRelres = 1e-8;

/// Analyze-once / refactorize-rest over a sequence. On a zero pivot or on
/// refinement failing the acceptance residual the policy first retries with
/// doubled regularization (generated sequences only), then re-analyzes the
/// current system; re-analyses are counted in the report.
SolveReport solve_sequence(KktSequence& seq, const PipelineOptions& options);

/// Writes a generated sequence as Matrix Market files plus a manifest that
/// load_sequence() accepts; reloading reproduces patterns and values exactly.
void write_sequence(const KktSequence& seq, const std::string& directory);

/// Entry point behind the `rlu` binary: subcommands gen, solve-seq, report.
/// Returns 0 on success, 1 on usage/input errors, 2 on partial solve failure.
int run_cli(int argc, const char* const* argv);

}  // namespace rlu::cli
