#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlu/sparse.hpp"

namespace rlu {

/// Blocks of one saddle-point system: Hessian block H (n x n, symmetric),
/// constraint Jacobian J (m x n, no empty rows), barrier diagonal D_y
/// (positive when mu > 0) and the primal/dual regularization shifts.
struct KktBlocks {
  CsrMatrix H;
  CsrMatrix J;
  DenseVector D_y;
  double mu = 0.0;
  double delta_p = 0.0;
  double delta_d = 0.0;
};

struct KktSystem {
  CsrMatrix K;      // (n+m) x (n+m), symmetric, stored general
  DenseVector rhs;  // empty until the caller manufactures or loads one
  double mu = 0.0;
  index_t k = 0;  // position in the sequence
};

/// Identically-patterned systems across a barrier continuation. For generated
/// sequences the per-step blocks are kept so a system can be re-assembled
/// with stronger regularization.
struct KktSequence {
  CsrMatrix template_pattern;
  std::vector<KktSystem> systems;
  std::vector<double> mu_values;
  double delta_p = 0.0;
  double delta_d = 0.0;
  std::vector<KktBlocks> blocks;  // empty for loaded sequences
  bool generated = false;
};

/// K = [[H + D_y + delta_p I, J^T], [J, -delta_d I]]. The (2,2) diagonal is
/// stored explicitly even when delta_d = 0 and every (1,1) diagonal slot is
/// present, so the pattern does not depend on the schedule. Throws on
/// asymmetric H or inconsistent dimensions; the result is bitwise symmetric.
KktSystem assemble_kkt(const KktBlocks& blocks);

struct GenConfig {
  index_t n = 200;
  index_t m = 80;
  std::uint64_t topology_seed = 1;
  double mu0 = 1e-1;
  double mu_min = 1e-7;
  double reduction = 0.2;
  double delta_p = 1e-8;
  double delta_d = 1e-8;
  std::uint64_t y_seed = 2;
  index_t num_systems = 0;  // 0: derive the length from the mu schedule
};

/// Synthetic fixed-pattern sequence: one random diagonally dominant symmetric
/// H and one random J are drawn once; per step k the barrier mu_k =
/// mu0 * reduction^k (clamped at mu_min) redraws the y trajectory, a subset
/// of which tracks the barrier so the D_y spread (and the conditioning)
/// grows as mu shrinks. Right-hand sides are manufactured from a random
/// solution so forward error is measurable.
KktSequence gen_sequence(const GenConfig& config);

/// Reads a sequence listed by a manifest: one matrix file per line with an
/// optional right-hand-side file in the second column, paths relative to the
/// manifest directory. Pattern equality is validated across systems; a
/// missing rhs defaults to K * ones.
KktSequence load_sequence(const std::string& manifest_path);

/// The geometric barrier schedule: mu0 * reduction^k, stopping at the first
/// value clamped to mu_min (that clamped value included).
std::vector<double> mu_schedule(double mu0, double mu_min, double reduction);

}  // namespace rlu
