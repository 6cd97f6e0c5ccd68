#include "rlu/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "rlu/io.hpp"

namespace rlu {

KktSystem assemble_kkt(const KktBlocks& blocks) {
  const index_t n = blocks.H.nrows;
  const index_t m = blocks.J.nrows;
  if (blocks.H.ncols != n) throw DimensionError("assemble_kkt: H must be square");
  if (blocks.J.ncols != n) {
    throw DimensionError("assemble_kkt: J has " + std::to_string(blocks.J.ncols) +
                         " columns, expected " + std::to_string(n));
  }
  if (static_cast<index_t>(blocks.D_y.size()) != n) {
    throw DimensionError("assemble_kkt: D_y length mismatch");
  }
  if (!blocks.H.has_values() || !blocks.J.has_values()) {
    throw Error("assemble_kkt: blocks must carry values");
  }
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = blocks.H.row_offsets[i]; k < blocks.H.row_offsets[i + 1]; ++k) {
      const index_t j = blocks.H.col_indices[k];
      const index_t t = blocks.H.find(j, i);
      if (t < 0 || blocks.H.values[t] != blocks.H.values[k]) {
        throw Error("assemble_kkt: H is not symmetric at (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
      }
    }
  }
  if (blocks.mu > 0.0) {
    for (double d : blocks.D_y) {
      if (!(d > 0.0)) throw Error("assemble_kkt: D_y must be positive when mu > 0");
    }
  }
  if (blocks.delta_p < 0.0 || blocks.delta_d < 0.0) {
    throw Error("assemble_kkt: regularization must be nonnegative");
  }
  for (index_t r = 0; r < m; ++r) {
    if (blocks.J.row_offsets[r + 1] == blocks.J.row_offsets[r]) {
      throw Error("assemble_kkt: J row " + std::to_string(r) + " is empty");
    }
  }

  CooMatrix coo;
  coo.nrows = n + m;
  coo.ncols = n + m;
  coo.entries.reserve(blocks.H.col_indices.size() + 2 * blocks.J.col_indices.size() + n + m);
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = blocks.H.row_offsets[i]; k < blocks.H.row_offsets[i + 1]; ++k) {
      coo.entries.push_back({i, blocks.H.col_indices[k], blocks.H.values[k]});
    }
    coo.entries.push_back({i, i, blocks.D_y[i] + blocks.delta_p});
  }
  for (index_t r = 0; r < m; ++r) {
    for (index_t k = blocks.J.row_offsets[r]; k < blocks.J.row_offsets[r + 1]; ++k) {
      const index_t c = blocks.J.col_indices[k];
      coo.entries.push_back({c, n + r, blocks.J.values[k]});  // J^T in the (1,2) block
      coo.entries.push_back({n + r, c, blocks.J.values[k]});
    }
    coo.entries.push_back({n + r, n + r, -blocks.delta_d});
  }
  coo.canonicalize();

  KktSystem sys;
  sys.K = coo_to_csr(coo);
  sys.mu = blocks.mu;
  return sys;
}

std::vector<double> mu_schedule(double mu0, double mu_min, double reduction) {
  if (!(mu0 > mu_min) || !(mu_min > 0.0)) throw Error("mu schedule requires mu0 > mu_min > 0");
  if (!(reduction > 0.0 && reduction < 1.0)) throw Error("reduction factor must be in (0, 1)");
  std::vector<double> mus;
  for (index_t k = 0;; ++k) {
    const double mu = mu0 * std::pow(reduction, static_cast<double>(k));
    if (mu <= mu_min) {
      mus.push_back(mu_min);
      break;
    }
    mus.push_back(mu);
  }
  return mus;
}

KktSequence gen_sequence(const GenConfig& config) {
  const index_t n = config.n, m = config.m;
  if (n < 1 || m < 1) throw Error("gen_sequence: n and m must be positive");
  if (m > n) throw Error("gen_sequence: m must not exceed n");
  if (config.num_systems < 0) throw Error("sequence length must be >= 1");

  std::vector<double> mus = mu_schedule(config.mu0, config.mu_min, config.reduction);
  if (config.num_systems > 0) {
    if (static_cast<index_t>(mus.size()) > config.num_systems) {
      mus.resize(config.num_systems);
    }
    while (static_cast<index_t>(mus.size()) < config.num_systems) {
      mus.push_back(config.mu_min);
    }
  }

  std::mt19937_64 topo_rng(config.topology_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // Symmetric H: a ring with short-range random chords, like the mostly
  // local connectivity of a transmission network. Diagonal dominance keeps
  // the (1,1) block positive definite across the whole continuation.
  CooMatrix hcoo;
  hcoo.nrows = n;
  hcoo.ncols = n;
  if (n > 1) {
    std::uniform_int_distribution<index_t> hop(2, std::min<index_t>(50, n - 1));
    std::set<std::pair<index_t, index_t>> edges;
    for (index_t i = 0; i < n; ++i) {
      edges.insert({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
      const index_t j = (i + hop(topo_rng)) % n;
      if (j != i) edges.insert({std::min(i, j), std::max(i, j)});
    }
    for (auto [a, b] : edges) {
      const double v = unit(topo_rng);
      hcoo.entries.push_back({a, b, v});
      hcoo.entries.push_back({b, a, v});
    }
  }
  hcoo.canonicalize();
  {
    DenseVector absrow(n, 0.0);
    for (const auto& e : hcoo.entries) absrow[e.row] += std::fabs(e.value);
    for (index_t i = 0; i < n; ++i) hcoo.entries.push_back({i, i, 1.0 + absrow[i]});
    hcoo.canonicalize();
  }
  CsrMatrix H = coo_to_csr(hcoo);

  // Constraint rows couple short variable ranges, each anchored at its own
  // base column so the rows stay structurally independent.
  CooMatrix jcoo;
  jcoo.nrows = m;
  jcoo.ncols = n;
  {
    std::uniform_int_distribution<index_t> offset(1, std::min<index_t>(25, n));
    for (index_t r = 0; r < m; ++r) {
      const index_t base = (r * n) / m;
      std::vector<index_t> cols{base};
      while (static_cast<index_t>(cols.size()) < std::min<index_t>(3, n)) {
        const index_t c = (base + offset(topo_rng)) % n;
        if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
      }
      for (index_t c : cols) jcoo.entries.push_back({r, c, unit(topo_rng)});
    }
  }
  jcoo.canonicalize();
  CsrMatrix J = coo_to_csr(jcoo);

  // A fixed subset of the bounds goes active: those y entries track the
  // barrier downward, spreading D_y = mu / y^2 as mu shrinks.
  std::mt19937_64 y_rng(config.y_seed);
  std::vector<char> active(n, 0);
  {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (index_t i = 0; i < n; ++i) active[i] = coin(y_rng) < 0.15 ? 1 : 0;
  }

  KktSequence seq;
  seq.generated = true;
  seq.delta_p = config.delta_p;
  seq.delta_d = config.delta_d;
  seq.mu_values = mus;
  std::uniform_real_distribution<double> inactive_y(0.5, 1.5);
  std::uniform_real_distribution<double> jitter(0.8, 1.25);
  for (std::size_t k = 0; k < mus.size(); ++k) {
    KktBlocks blocks;
    blocks.H = H;
    blocks.J = J;
    blocks.mu = mus[k];
    blocks.delta_p = config.delta_p;
    blocks.delta_d = config.delta_d;
    blocks.D_y.resize(n);
    for (index_t i = 0; i < n; ++i) {
      // Active bounds: y tracks mu, so D_y = mu / y^2 ~ 1/mu grows as the
      // barrier shrinks; inactive entries stay O(mu).
      const double y = active[i] ? mus[k] * jitter(y_rng) : inactive_y(y_rng);
      blocks.D_y[i] = mus[k] / (y * y);
    }
    KktSystem sys = assemble_kkt(blocks);
    sys.k = static_cast<index_t>(k);
    DenseVector x_true(n + m);
    for (double& v : x_true) v = unit(y_rng);
    sys.rhs = spmv(sys.K, x_true);
    if (k == 0) {
      seq.template_pattern = sys.K;
      seq.template_pattern.values.clear();
    } else if (!pattern_equal(sys.K, seq.template_pattern)) {
      throw Error("gen_sequence: pattern drifted at step " + std::to_string(k));
    }
    seq.systems.push_back(std::move(sys));
    seq.blocks.push_back(std::move(blocks));
  }
  return seq;
}

KktSequence load_sequence(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest " + manifest_path);
  const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

  KktSequence seq;
  seq.generated = false;
  std::string line;
  index_t k = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string mat_file, rhs_file;
    ls >> mat_file >> rhs_file;

    KktSystem sys;
    sys.k = k;
    sys.K = coo_to_csr([&] {
      CooMatrix coo = mm_read((base / mat_file).string());
      return coo;
    }());
    if (sys.K.nrows != sys.K.ncols) {
      throw IoError(mat_file + ": sequence matrices must be square");
    }
    if (!rhs_file.empty()) {
      const CooMatrix rc = mm_read((base / rhs_file).string());
      if (rc.ncols != 1 || rc.nrows != sys.K.nrows) {
        throw IoError(rhs_file + ": right-hand side must be a " + std::to_string(sys.K.nrows) +
                      " x 1 vector");
      }
      sys.rhs.assign(rc.nrows, 0.0);
      for (const auto& e : rc.entries) sys.rhs[e.row] = e.value;
    } else {
      sys.rhs = spmv(sys.K, DenseVector(sys.K.ncols, 1.0));
    }

    if (k == 0) {
      seq.template_pattern = sys.K;
      seq.template_pattern.values.clear();
    } else if (!pattern_equal(sys.K, seq.template_pattern)) {
      throw PatternMismatchError("pattern mismatch at index " + std::to_string(k));
    }
    seq.systems.push_back(std::move(sys));
    ++k;
  }
  if (seq.systems.empty()) throw IoError("manifest lists no systems: " + manifest_path);
  return seq;
}

}  // namespace rlu
