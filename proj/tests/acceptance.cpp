// Acceptance suite: each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails. Criterion 9 drives the real CLI
// binary, whose path arrives as argv[1].

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "rlu/cli.hpp"
#include "rlu/kkt.hpp"
#include "rlu/numeric.hpp"
#include "rlu/refine.hpp"
#include "rlu/symbolic.hpp"
#include "rlu/trisolve.hpp"

using namespace rlu;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli_path;

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Dense B = P (D_r A D_c Q) P^T from the analysis products.
oracle::Dense transformed_dense(const CsrMatrix& A, const SymbolicFactors& sf) {
  const index_t n = A.nrows;
  oracle::Dense B(n, std::vector<double>(n, 0.0));
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const index_t j = A.col_indices[k];
      double v = A.values[k];
      index_t jq = j;
      if (sf.match) {
        v *= sf.match->scaling.row_scale[i] * sf.match->scaling.col_scale[j];
        jq = sf.match->col_perm.forward[j];
      }
      B[sf.amd.forward[i]][sf.amd.forward[jq]] = v;
    }
  }
  return B;
}

double factor_residual(const CsrMatrix& A, const NumericFactors& nf) {
  const SymbolicFactors& sym = *nf.symbolic;
  const index_t n = sym.n;
  const oracle::Dense B = transformed_dense(A, sym);

  oracle::Dense L(n, std::vector<double>(n, 0.0));
  oracle::Dense U(n, std::vector<double>(n, 0.0));
  for (index_t i = 0; i < n; ++i) {
    L[i][i] = 1.0;
    for (index_t k = sym.combined_pattern.row_offsets[i];
         k < sym.combined_pattern.row_offsets[i + 1]; ++k) {
      const index_t j = sym.combined_pattern.col_indices[k];
      (j < i ? L[i][j] : U[i][j]) = nf.values[k];
    }
  }
  double diff2 = 0.0, b2 = 0.0;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < n; ++j) {
      double lu = 0.0;
      for (index_t k = 0; k <= std::min(i, j); ++k) lu += L[i][k] * U[k][j];
      diff2 += (B[i][j] - lu) * (B[i][j] - lu);
      b2 += B[i][j] * B[i][j];
    }
  }
  return std::sqrt(diff2 / b2);
}

std::vector<CsrMatrix> dominant_corpus(std::uint64_t seed, int count, index_t max_n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<index_t> size(2, max_n);
  std::vector<CsrMatrix> corpus;
  corpus.reserve(count);
  for (int t = 0; t < count; ++t) {
    corpus.push_back(oracle::random_sparse(rng, size(rng), 5, 0.1, 1.0, true));
  }
  return corpus;
}

// ---- criteria ----

void criterion_factor_correctness() {
  const auto t0 = Clock::now();
  const std::vector<CsrMatrix> corpus = dominant_corpus(1001, 100, 300);
  for (const CsrMatrix& A : corpus) {
    const auto sf = std::make_shared<const SymbolicFactors>(symbolic_analyze(A));
    const NumericFactors nf = factorize(sf, A);
    const double res = factor_residual(A, nf);
    require(res <= 1e-13, "factor residual " + std::to_string(res) + " above 1e-13");
  }
  const double secs = seconds_since(t0);
  require(secs < 30.0, "runtime " + std::to_string(secs) + "s exceeds 30s");
}

void criterion_symbolic_oracle() {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<index_t> size(1, 50);
  for (int t = 0; t < 100; ++t) {
    const CsrMatrix B = oracle::random_sparse(rng, size(rng), 4, 0.5, 1.5, false);
    const CsrMatrix F = fill1_pattern(B);
    const oracle::Pattern expect =
        oracle::symbolic_elimination_fill(oracle::pattern_from_csr(B));
    require(F.nnz() == oracle::count_true(expect), "fill pattern size mismatch");
    for (index_t i = 0; i < B.nrows; ++i) {
      for (index_t j = 0; j < B.nrows; ++j) {
        require((F.find(i, j) >= 0) == (expect[i][j] != 0), "fill pattern entry mismatch");
      }
    }
  }
}

void criterion_mc64_optimality() {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<index_t> size(1, 8);
  std::uniform_int_distribution<int> density(35, 100);
  std::uniform_real_distribution<double> mag(1e-4, 1e4);
  std::uniform_int_distribution<int> coin(0, 1);

  int tested = 0;
  while (tested < 200) {
    const index_t n = size(rng);
    oracle::Dense M(n, std::vector<double>(n, 0.0));
    const int pct = density(rng);
    for (index_t i = 0; i < n; ++i) {
      for (index_t j = 0; j < n; ++j) {
        if (static_cast<int>(rng() % 100) < pct) {
          M[i][j] = (coin(rng) ? 1.0 : -1.0) * mag(rng);
        }
      }
    }
    const double best = oracle::best_matching_product(M);
    if (best == 0.0) continue;

    CooMatrix coo;
    coo.nrows = n;
    coo.ncols = n;
    for (index_t i = 0; i < n; ++i) {
      for (index_t j = 0; j < n; ++j) {
        if (M[i][j] != 0.0) coo.entries.push_back({i, j, M[i][j]});
      }
    }
    coo.canonicalize();
    const CsrMatrix A = coo_to_csr(coo);
    const MatchingResult mr = mc64_scale(A);

    double got = 0.0;
    for (index_t i = 0; i < n; ++i) {
      got += std::log(std::fabs(A.values[A.find(i, mr.col_perm.inverse[i])]));
    }
    require(std::fabs(got - std::log(best)) <= 1e-12 * std::max(1.0, std::fabs(std::log(best))),
            "matching product below the enumeration optimum");

    const CsrMatrix scaled = permute_columns(apply_scaling(A, mr.scaling), mr.col_perm);
    for (index_t i = 0; i < n; ++i) {
      for (index_t k = scaled.row_offsets[i]; k < scaled.row_offsets[i + 1]; ++k) {
        const double magv = std::fabs(scaled.values[k]);
        if (scaled.col_indices[k] == i) {
          require(std::fabs(magv - 1.0) <= 1e-12, "scaled diagonal must be 1 +- 1e-12");
        } else {
          require(magv <= 1.0 + 1e-12, "scaled off-diagonal above 1 + 1e-12");
        }
      }
    }
    ++tested;
  }
}

void criterion_refactorize_bitwise() {
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<index_t> size(2, 60);
  std::uniform_real_distribution<double> bump(0.9, 1.1);
  for (int seq = 0; seq < 50; ++seq) {
    CsrMatrix A = oracle::random_sparse(rng, size(rng), 4, 0.1, 1.0, true);
    const auto sf = std::make_shared<const SymbolicFactors>(symbolic_analyze(A));
    NumericFactors reused = factorize(sf, A);
    for (int step = 1; step < 10; ++step) {
      for (double& v : A.values) v *= bump(rng);
      refactorize(reused, A);
      const NumericFactors fresh = factorize(sf, A);
      require(reused.values == fresh.values, "refactorize differs from factorize bitwise");
    }
  }
}

void criterion_schedule_determinism() {
  // Random diagonally dominant systems plus one generated KKT sequence.
  const std::vector<CsrMatrix> corpus = dominant_corpus(1005, 100, 300);
  std::mt19937_64 rng(1006);
  SolveWorkspace ws;
  auto check_one = [&](const CsrMatrix& A) {
    const auto sf = std::make_shared<const SymbolicFactors>(symbolic_analyze(A));
    const NumericFactors reference = factorize(sf, A);
    const DenseVector b = oracle::random_vector(rng, A.nrows);
    const DenseVector x_ref = solve_system(reference, b, ws);
    for (int workers : {2, 4, 8}) {
      FactorOptions opt;
      opt.exec.mode = ExecMode::scheduled_parallel;
      opt.exec.worker_count = workers;
      const NumericFactors par = factorize(sf, A, opt);
      require(par.values == reference.values, "parallel factorization not bitwise equal");
      const ExecPolicy pol{ExecMode::scheduled_parallel, workers, 0};
      require(solve_system(par, b, ws, pol) == x_ref, "parallel trisolve not bitwise equal");
    }
  };
  for (const CsrMatrix& A : corpus) check_one(A);

  GenConfig cfg;
  cfg.n = 700;
  cfg.m = 300;
  const KktSequence seq = gen_sequence(cfg);
  for (const KktSystem& sys : seq.systems) check_one(sys.K);
}

void criterion_kkt_sequence_accuracy() {
  const auto t0 = Clock::now();
  GenConfig cfg;
  cfg.n = 1400;
  cfg.m = 600;  // n + m = 2000
  cfg.mu0 = 1e-1;
  cfg.mu_min = 1e-7;
  cfg.delta_p = 1e-8;
  cfg.delta_d = 1e-8;
  KktSequence seq = gen_sequence(cfg);

  cli::PipelineOptions opt;
  opt.refine = cli::RefineMethod::fgmres;
  opt.refine_tol = 1e-14;
  opt.refine_maxit = 20;
  const SolveReport rep = cli::solve_sequence(seq, opt);

  require(rep.systems.size() >= 10, "schedule must span mu = 1e-1 down to 1e-7");
  int analyses = 0;
  std::vector<int> iters;
  for (const auto& r : rep.systems) {
    analyses += r.analyze_ms > 0.0;
    require(r.status == "ok", "system " + std::to_string(r.k) + " failed");
    require(r.relres_final <= 1e-8,
            "relres " + std::to_string(r.relres_final) + " above 1e-8 at k=" +
                std::to_string(r.k));
    iters.push_back(r.refine_iters);
  }
  require(analyses == 1, "expected exactly one analysis over the sequence");
  std::sort(iters.begin(), iters.end());
  const double median = iters.size() % 2 == 1
                            ? iters[iters.size() / 2]
                            : 0.5 * (iters[iters.size() / 2 - 1] + iters[iters.size() / 2]);
  require(median <= 2.0, "median refinement iterations " + std::to_string(median) + " above 2");
  const double secs = seconds_since(t0);
  require(secs < 60.0, "runtime " + std::to_string(secs) + "s exceeds 60s");
}

void criterion_amortization() {
  GenConfig cfg;
  cfg.n = 7000;
  cfg.m = 3000;  // n + m = 10^4
  cfg.num_systems = 1;
  const KktSequence seq = gen_sequence(cfg);
  const CsrMatrix& K = seq.systems[0].K;

  std::vector<double> first_ms, refactor_ms;
  for (int run = 0; run < 10; ++run) {
    auto t = Clock::now();
    const auto sf = std::make_shared<const SymbolicFactors>(symbolic_analyze(K));
    NumericFactors nf = factorize(sf, K);
    first_ms.push_back(1e3 * seconds_since(t));

    t = Clock::now();
    refactorize(nf, K);
    refactor_ms.push_back(1e3 * seconds_since(t));
  }
  std::sort(first_ms.begin(), first_ms.end());
  std::sort(refactor_ms.begin(), refactor_ms.end());
  const double first = first_ms[first_ms.size() / 2];
  const double refactor = refactor_ms[refactor_ms.size() / 2];
  require(refactor <= 0.5 * first,
          "refactorize " + std::to_string(refactor) + " ms not within half of analyze+factorize " +
              std::to_string(first) + " ms");
}

void criterion_fgmres_contracts() {
  std::mt19937_64 rng(1007);
  SolveWorkspace ws;
  for (int t = 0; t < 25; ++t) {
    std::uniform_int_distribution<index_t> size(5, 150);
    const index_t n = size(rng);
    const CsrMatrix A = oracle::random_sparse(rng, n, 5, 0.1, 1.0, true);
    const auto sf = std::make_shared<const SymbolicFactors>(symbolic_analyze(A));
    const NumericFactors f = factorize(sf, A);
    const DenseVector b = oracle::random_vector(rng, n);
    const LinearOperator precond = [&f, &ws](const DenseVector& in, DenseVector& out) {
      solve_system(f, in, ws, out);
    };

    // Exact preconditioner from a zero start: one iteration.
    RefineConfig cfg;
    const RefineOutcome out = fgmres_refine(A, b, DenseVector(n, 0.0), precond, cfg);
    require(out.converged && out.iterations == 1,
            "exact preconditioner must converge in one iteration");
    for (std::size_t i = 1; i < out.residual_history.size(); ++i) {
      require(out.residual_history[i] <= out.residual_history[i - 1] * (1 + 1e-12),
              "residual history must be nonincreasing");
    }
  }

  // CGS2 basis orthogonality at Krylov dimensions beyond one, driven with the
  // identity preconditioner so the cycle runs long.
  for (int t = 0; t < 10; ++t) {
    const index_t n = 60;
    const CsrMatrix A = oracle::random_sparse(rng, n, 4, 0.1, 1.0, true);
    const DenseVector b = oracle::random_vector(rng, n);
    std::vector<DenseVector> basis;
    DenseVector r = b;  // x0 = 0
    basis.push_back(r);
    double nrm = norm2(basis[0]);
    for (double& e : basis[0]) e /= nrm;
    for (int i = 0; i < 12; ++i) {
      const DenseVector w = spmv(A, basis.back());
      const Cgs2Result res = cgs2_orthonormalize(basis, w);
      if (res.breakdown) break;
      basis.push_back(res.vector);
    }
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t c = a + 1; c < basis.size(); ++c) {
        require(std::fabs(dot(basis[a], basis[c])) <= 1e-12,
                "CGS2 basis orthogonality above 1e-12");
      }
    }
  }
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_cli_roundtrip() {
  namespace fs = std::filesystem;
  require(!g_cli_path.empty(), "CLI binary path must be passed as argv[1]");
  const fs::path dir = fs::temp_directory_path() / "rlu_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();

  require(run_command(g_cli_path + " gen --out " + d + " --n 200 --m 80 > /dev/null") == 0,
          "gen must exit 0");
  require(run_command(g_cli_path + " solve-seq --input " + d + "/manifest.txt --refine fgmres" +
                      " --format json --out " + d + "/report.json") == 0,
          "solve-seq must exit 0");
  require(run_command(g_cli_path + " report " + d + "/report.json --format csv --out " + d +
                      "/report.csv") == 0,
          "report must exit 0");

  std::ifstream in(dir / "report.json");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(buf.str());  // throws on invalid JSON
  require(j.contains("systems") && j.contains("aggregate"), "report schema incomplete");
  int analyses = 0, solved = 0;
  for (const auto& rec : j["systems"]) {
    for (const char* field :
         {"k", "n", "nnz", "analyze_ms", "scatter_ms", "factor_ms", "trisolve_ms", "refine_ms",
          "refine_iters", "relres_direct", "relres_final", "status"}) {
      require(rec.contains(field), std::string("record missing field ") + field);
    }
    analyses += rec["analyze_ms"].get<double>() > 0.0;
    solved += rec["status"].get<std::string>() == "ok";
  }
  require(analyses == 1, "expected exactly one analysis event");
  require(solved == static_cast<int>(j["systems"].size()), "all systems must solve");
  require(j["aggregate"].contains("total_ms") && j["aggregate"].contains("reanalysis_count"),
          "aggregate schema incomplete");

  std::ifstream csv(dir / "report.csv");
  int data_rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty() && line[0] != '#') ++data_rows;
  }
  require(data_rows == static_cast<int>(j["systems"].size()) + 1,
          "CSV must hold one data row per system plus a header");
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  struct Criterion {
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria{
      {"factorization correctness (100 systems, residual <= 1e-13, < 30 s)",
       criterion_factor_correctness},
      {"symbolic fill pattern equals elimination oracle (100 patterns)",
       criterion_symbolic_oracle},
      {"mc64 optimality and I-matrix scaling (200 instances)", criterion_mc64_optimality},
      {"refactorize bitwise-equal to factorize (50 sequences x 10)",
       criterion_refactorize_bitwise},
      {"schedule determinism for workers {2,4,8} (factor + trisolve)",
       criterion_schedule_determinism},
      {"KKT sequence accuracy (n+m = 2000, mu 1e-1 -> 1e-7, relres <= 1e-8, < 60 s)",
       criterion_kkt_sequence_accuracy},
      {"amortization at n+m = 10^4 (refactorize <= 0.5 x first solve)",
       criterion_amortization},
      {"FGMRES contracts (1-step exact preconditioner, monotone history, CGS2)",
       criterion_fgmres_contracts},
      {"CLI gen -> solve-seq -> report round trip", criterion_cli_roundtrip},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i].run();
      std::printf("[PASS] criterion %zu: %s\n", i + 1, criteria[i].name);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] criterion %zu: %s -- %s\n", i + 1, criteria[i].name, e.what());
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
