#include "rlu/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rlu/io.hpp"
#include "rlu/numeric.hpp"
#include "rlu/refine.hpp"
#include "rlu/symbolic.hpp"
#include "rlu/trisolve.hpp"

namespace rlu::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Adds one explicit zero at an absent slot of row 0, changing the pattern
// without changing the solution.
void add_structural_zero(CsrMatrix& K) {
  index_t col = -1;
  for (index_t c = 0; c < K.ncols; ++c) {
    if (K.find(0, c) < 0) {
      col = c;
      break;
    }
  }
  if (col < 0) return;  // dense row, nothing to inject
  CooMatrix coo;
  coo.nrows = K.nrows;
  coo.ncols = K.ncols;
  for (index_t i = 0; i < K.nrows; ++i) {
    for (index_t k = K.row_offsets[i]; k < K.row_offsets[i + 1]; ++k) {
      coo.entries.push_back({i, K.col_indices[k], K.values[k]});
    }
  }
  coo.entries.push_back({0, col, 0.0});
  coo.canonicalize();
  K = coo_to_csr(coo);
}

double doubled(double delta) { return delta == 0.0 ? 1e-12 : 2.0 * delta; }

}  // namespace

SolveReport solve_sequence(KktSequence& seq, const PipelineOptions& options) {
  const auto t_total = Clock::now();

  if (options.break_pattern_at >= 0) {
    // A pattern break persists for the rest of the sequence, as it would for
    // a structural change inside an optimization run.
    for (index_t k = options.break_pattern_at;
         k < static_cast<index_t>(seq.systems.size()); ++k) {
      add_structural_zero(seq.systems[k].K);
    }
  }

  SolveReport rep;
  const AnalyzeOptions aopt{options.use_scaling, options.use_amd};
  FactorOptions fopt;
  fopt.exec = options.exec;
  fopt.pivot_floor = options.pivot_floor;

  std::shared_ptr<const SymbolicFactors> sym;
  std::optional<NumericFactors> numeric;
  SolveWorkspace ws;
  DenseVector x;

  for (auto& sys : seq.systems) {
    SystemRecord r;
    r.k = sys.k;
    r.n = sys.K.nrows;
    r.nnz = sys.K.nnz();

    bool reg_doubled = false;
    bool reanalyzed = false;
    bool force_analyze = false;
    bool solved = false;

    while (!solved) {
      bool attempt_failed = false;
      try {
        const bool pattern_changed = sym && !pattern_equal(sys.K, sym->source_pattern);
        if (pattern_changed) ++rep.reanalysis_count;
        if (!sym || pattern_changed || force_analyze) {
          force_analyze = false;
          const auto t = Clock::now();
          sym = std::make_shared<const SymbolicFactors>(symbolic_analyze(sys.K, aopt));
          numeric.emplace(sym, fopt);
          r.analyze_ms += ms_since(t);
        }
        if (!numeric) numeric.emplace(sym, fopt);

        auto t = Clock::now();
        reset_values(*numeric, sys.K);
        r.scatter_ms += ms_since(t);

        t = Clock::now();
        factorize_scattered(*numeric);
        r.factor_ms += ms_since(t);

        t = Clock::now();
        solve_system(*numeric, sys.rhs, ws, x, options.exec);
        r.trisolve_ms += ms_since(t);

        r.relres_direct = relative_residual(sys.K, x, sys.rhs);
        r.relres_final = r.relres_direct;
        r.refine_iters = 0;

        if (options.refine != RefineMethod::none) {
          RefineConfig rc;
          rc.max_iterations = options.refine_maxit;
          rc.tolerance = options.refine_tol;
          const LinearOperator precond = [&](const DenseVector& in, DenseVector& out) {
            solve_system(*numeric, in, ws, out, options.exec);
          };
          t = Clock::now();
          RefineOutcome outcome = options.refine == RefineMethod::fgmres
                                      ? fgmres_refine(sys.K, sys.rhs, x, precond, rc)
                                      : classic_refine(sys.K, sys.rhs, x, precond, rc);
          r.refine_ms += ms_since(t);
          r.refine_iters = outcome.iterations;
          x = std::move(outcome.x);
          r.relres_final = relative_residual(sys.K, x, sys.rhs);
        }

        solved = std::isfinite(r.relres_final) && r.relres_final <= kAcceptRelres;
        attempt_failed = !solved;
      } catch (const Error&) {
        // Zero pivot, or an analysis that failed outright (e.g. a structurally
        // singular system); both go through the same escalation.
        attempt_failed = true;
      }

      if (!attempt_failed) break;

      // Escalation: stronger regularization first (when the blocks are
      // available), then a fresh analysis of the current system.
      if (seq.generated && !reg_doubled) {
        reg_doubled = true;
        KktBlocks& b = seq.blocks[sys.k];
        b.delta_p = doubled(b.delta_p);
        b.delta_d = doubled(b.delta_d);
        KktSystem regged = assemble_kkt(b);
        sys.K = std::move(regged.K);  // same pattern, stronger diagonal
      } else if (!reanalyzed) {
        reanalyzed = true;
        force_analyze = true;
        ++rep.reanalysis_count;
      } else {
        r.status = "failed";
        break;
      }
    }
    if (solved) r.status = "ok";
    rep.systems.push_back(std::move(r));
  }

  rep.total_ms = ms_since(t_total);
  rep.finalize();
  return rep;
}

void write_sequence(const KktSequence& seq, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  std::ofstream manifest(fs::path(directory) / "manifest.txt");
  if (!manifest) throw IoError("cannot write manifest in " + directory);

  char kname[32], rname[32];
  for (const auto& sys : seq.systems) {
    std::snprintf(kname, sizeof(kname), "k_%03lld.mtx", static_cast<long long>(sys.k));
    std::snprintf(rname, sizeof(rname), "rhs_%03lld.mtx", static_cast<long long>(sys.k));
    mm_write(sys.K, (fs::path(directory) / kname).string());

    CsrMatrix rhs;
    rhs.nrows = static_cast<index_t>(sys.rhs.size());
    rhs.ncols = 1;
    rhs.row_offsets.resize(rhs.nrows + 1);
    for (index_t i = 0; i <= rhs.nrows; ++i) rhs.row_offsets[i] = i;
    rhs.col_indices.assign(rhs.nrows, 0);
    rhs.values = sys.rhs;
    mm_write(rhs, (fs::path(directory) / rname).string());

    manifest << kname << " " << rname << "\n";
  }
  if (!manifest) throw IoError("write failed for manifest in " + directory);
}

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open " + out_path + " for writing");
  out << text << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"sparse LU refactorization solver and benchmark for fixed-pattern KKT sequences",
               "rlu"};
  app.require_subcommand(1);

  GenConfig gen_cfg;
  long long cli_systems = -1;
  std::string gen_out;

  auto add_gen_options = [&](CLI::App* cmd) {
    cmd->add_option("--n", gen_cfg.n, "primal dimension");
    cmd->add_option("--m", gen_cfg.m, "number of constraints");
    cmd->add_option("--systems", cli_systems, "sequence length (default: from the mu schedule)");
    cmd->add_option("--mu0", gen_cfg.mu0, "initial barrier parameter");
    cmd->add_option("--mu-min", gen_cfg.mu_min, "barrier floor");
    cmd->add_option("--factor", gen_cfg.reduction, "barrier reduction factor");
    cmd->add_option("--delta-p", gen_cfg.delta_p, "primal regularization");
    cmd->add_option("--delta-d", gen_cfg.delta_d, "dual regularization");
    cmd->add_option("--seed", gen_cfg.topology_seed, "topology seed");
    cmd->add_option("--y-seed", gen_cfg.y_seed, "trajectory seed");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic KKT sequence on disk");
  gen->add_option("--out", gen_out, "output directory")->required();
  add_gen_options(gen);

  CLI::App* solve = app.add_subcommand("solve-seq", "solve a sequence, analyzing once and "
                                                    "refactorizing the rest");
  std::string input_manifest;
  bool use_gen = false;
  std::string scaling = "mc64", ordering = "amd", refine = "none", mode = "sequential";
  std::string format = "json", out_path;
  int workers = 0;
  long long break_at = -1;
  PipelineOptions pipe;
  solve->add_option("--input", input_manifest, "sequence manifest file");
  solve->add_flag("--gen", use_gen, "generate the sequence in-process");
  add_gen_options(solve);
  solve->add_option("--scaling", scaling)->check(CLI::IsMember({"mc64", "none"}));
  solve->add_option("--ordering", ordering)->check(CLI::IsMember({"amd", "natural"}));
  solve->add_option("--refine", refine)->check(CLI::IsMember({"fgmres", "classic", "none"}));
  solve->add_option("--refine-tol", pipe.refine_tol, "refinement tolerance");
  solve->add_option("--refine-maxit", pipe.refine_maxit, "refinement iteration cap");
  solve->add_option("--mode", mode)->check(CLI::IsMember({"sequential", "parallel"}));
  solve->add_option("--workers", workers, "worker threads in parallel mode (0 = all)");
  solve->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--out", out_path, "report path (default stdout)");
  solve->add_option("--break-pattern-at", break_at,
                    "inject a pattern break at this index (testing aid)");

  CLI::App* report = app.add_subcommand("report", "render a JSON report as CSV or JSON");
  std::string report_in;
  report->add_option("input", report_in, "report JSON file")->required();
  report->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  report->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (cli_systems == 0) throw Error("sequence length must be >= 1");
    if (cli_systems > 0) gen_cfg.num_systems = cli_systems;

    if (gen->parsed()) {
      const KktSequence seq = gen_sequence(gen_cfg);
      write_sequence(seq, gen_out);
      std::cout << "wrote " << seq.systems.size() << " systems to " << gen_out << "\n";
      return 0;
    }

    if (solve->parsed()) {
      if (use_gen == !input_manifest.empty()) {
        std::cerr << "error: exactly one of --input or --gen is required\n";
        return 1;
      }
      pipe.use_scaling = scaling == "mc64";
      pipe.use_amd = ordering == "amd";
      pipe.refine = refine == "fgmres"  ? RefineMethod::fgmres
                    : refine == "classic" ? RefineMethod::classic
                                          : RefineMethod::none;
      pipe.exec.mode = mode == "parallel" ? ExecMode::scheduled_parallel : ExecMode::sequential;
      pipe.exec.worker_count = workers > 0 ? workers : omp_get_max_threads();
      pipe.break_pattern_at = break_at;

      KktSequence seq = use_gen ? gen_sequence(gen_cfg) : load_sequence(input_manifest);
      const SolveReport rep = solve_sequence(seq, pipe);
      emit(format == "json" ? report_to_json(rep) : report_to_csv(rep), out_path);
      return rep.systems_solved == static_cast<index_t>(rep.systems.size()) ? 0 : 2;
    }

    // report
    std::ifstream in(report_in);
    if (!in) throw IoError("cannot open " + report_in);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const SolveReport rep = report_from_json(text);
    emit(format == "json" ? report_to_json(rep) : report_to_csv(rep), out_path);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rlu::cli
