// Compares the OpenMP scheduled kernels against the sequential reference on a
// synthetic KKT system: factorization, triangular solve, and the
// analyze-once/refactorize amortization ratio.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "rlu/kkt.hpp"
#include "rlu/numeric.hpp"
#include "rlu/symbolic.hpp"
#include "rlu/trisolve.hpp"

using namespace rlu;

namespace {

using Clock = std::chrono::steady_clock;

template <class Fn>
double median_ms(int reps, Fn&& fn) {
  std::vector<double> times;
  times.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential vs scheduled-parallel kernel benchmark", "bench_kernels"};
  index_t n = 7000, m = 3000;
  int reps = 5;
  std::vector<int> worker_counts{2, 4, 8};
  app.add_option("--n", n, "primal dimension");
  app.add_option("--m", m, "number of constraints");
  app.add_option("--reps", reps, "repetitions per measurement");
  app.add_option("--workers", worker_counts, "worker counts to benchmark");
  CLI11_PARSE(app, argc, argv);

  GenConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.num_systems = 1;
  KktSequence seq = gen_sequence(cfg);
  const CsrMatrix& K = seq.systems[0].K;
  const DenseVector& b = seq.systems[0].rhs;
  std::printf("system: n+m = %lld, nnz = %lld\n", static_cast<long long>(K.nrows),
              static_cast<long long>(K.nnz()));

  const auto t0 = Clock::now();
  auto sym = std::make_shared<const SymbolicFactors>(symbolic_analyze(K));
  const double analyze_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  std::printf("analyze: %.2f ms (fill-in %lld)\n", analyze_ms,
              static_cast<long long>(sym->fill_count));

  FactorOptions seq_opt;
  NumericFactors factors = factorize(sym, K, seq_opt);
  const double factor_seq = median_ms(reps, [&] { refactorize(factors, K); });
  std::printf("%-28s %10.2f ms\n", "factorize (sequential)", factor_seq);

  const std::vector<double> reference = factors.values;
  for (int w : worker_counts) {
    FactorOptions par_opt;
    par_opt.exec.mode = ExecMode::scheduled_parallel;
    par_opt.exec.worker_count = w;
    NumericFactors par = factorize(sym, K, par_opt);
    const double t = median_ms(reps, [&] { refactorize(par, K); });
    const bool identical = par.values == reference;
    std::printf("factorize (parallel, %2d)      %10.2f ms   speedup %.2fx   bitwise %s\n", w, t,
                factor_seq / t, identical ? "match" : "MISMATCH");
  }

  SolveWorkspace ws;
  DenseVector x;
  ExecPolicy seq_exec;
  solve_system(factors, b, ws, x, seq_exec);
  const double solve_seq = median_ms(reps, [&] { solve_system(factors, b, ws, x, seq_exec); });
  std::printf("%-28s %10.2f ms\n", "trisolve (sequential)", solve_seq);
  const DenseVector x_ref = x;
  for (int w : worker_counts) {
    ExecPolicy par_exec{ExecMode::scheduled_parallel, w, 0};
    solve_system(factors, b, ws, x, par_exec);
    const bool identical = x == x_ref;
    const double t = median_ms(reps, [&] { solve_system(factors, b, ws, x, par_exec); });
    std::printf("trisolve (parallel, %2d)       %10.2f ms   speedup %.2fx   bitwise %s\n", w, t,
                solve_seq / t, identical ? "match" : "MISMATCH");
  }

  const double refactor_ms = median_ms(reps, [&] {
    reset_values(factors, K);
    factorize_scattered(factors);
  });
  std::printf("amortization: refactorize %.2f ms vs analyze+factorize %.2f ms (ratio %.3f)\n",
              refactor_ms, analyze_ms + factor_seq, refactor_ms / (analyze_ms + factor_seq));
  return 0;
}
