#include "rlu/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace rlu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MatchingResult mc64_scale(const CsrMatrix& A) {
  if (A.nrows != A.ncols) throw DimensionError("mc64_scale: matrix must be square");
  if (!A.has_values()) throw Error("mc64_scale: matrix has no values");
  const index_t n = A.nrows;

  // Log-cost transform c_ij = log(max_k |a_kj|) - log|a_ij| >= 0. Exact zeros
  // are excluded from the candidate set but stay in the pattern.
  std::vector<double> col_max(n, 0.0);
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      col_max[A.col_indices[k]] = std::max(col_max[A.col_indices[k]], std::fabs(A.values[k]));
    }
  }
  for (index_t j = 0; j < n; ++j) {
    if (col_max[j] == 0.0) {
      throw StructurallySingularError(
          "structurally singular: column " + std::to_string(j) + " has no nonzero entries", {});
    }
  }
  std::vector<double> log_col_max(n);
  for (index_t j = 0; j < n; ++j) log_col_max[j] = std::log(col_max[j]);

  std::vector<double> cost(A.col_indices.size(), kInf);
  for (index_t i = 0; i < n; ++i) {
    bool row_has_candidate = false;
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const double a = std::fabs(A.values[k]);
      if (a > 0.0) {
        cost[k] = log_col_max[A.col_indices[k]] - std::log(a);
        row_has_candidate = true;
      }
    }
    if (!row_has_candidate) {
      throw StructurallySingularError(
          "structurally singular: row " + std::to_string(i) + " has no nonzero entries", {i});
    }
  }

  std::vector<index_t> row_match(n, -1);
  std::vector<index_t> col_match(n, -1);
  std::vector<double> u(n, 0.0);  // row duals
  std::vector<double> v(n, 0.0);  // column duals; u_i + v_j <= c_ij throughout

  // Cheap initialization: v_j = 0 (each column max has cost 0), u_i = row min,
  // then greedily match zero-reduced-cost arcs.
  for (index_t i = 0; i < n; ++i) {
    double umin = kInf;
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      umin = std::min(umin, cost[k]);
    }
    u[i] = umin;
  }
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const index_t j = A.col_indices[k];
      if (col_match[j] == -1 && cost[k] - u[i] - v[j] == 0.0) {
        row_match[i] = j;
        col_match[j] = i;
        break;
      }
    }
  }

  // Shortest augmenting path (Dijkstra over reduced costs) for each row left
  // unmatched by the greedy pass.
  std::vector<double> dist(n);
  std::vector<index_t> pred_row(n);
  std::vector<char> finalized(n);
  using QueueItem = std::pair<double, index_t>;
  for (index_t r = 0; r < n; ++r) {
    if (row_match[r] != -1) continue;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred_row.begin(), pred_row.end(), index_t{-1});
    std::fill(finalized.begin(), finalized.end(), char{0});
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>> pq;

    for (index_t k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      if (cost[k] == kInf) continue;
      const index_t j = A.col_indices[k];
      const double d = cost[k] - u[r] - v[j];
      if (d < dist[j]) {
        dist[j] = d;
        pred_row[j] = r;
        pq.push({d, j});
      }
    }

    index_t found_col = -1;
    double found_dist = kInf;
    while (!pq.empty()) {
      const auto [d, j] = pq.top();
      pq.pop();
      if (finalized[j] || d > dist[j]) continue;
      finalized[j] = 1;
      if (col_match[j] == -1) {
        found_col = j;
        found_dist = d;
        break;
      }
      const index_t i2 = col_match[j];
      for (index_t k = A.row_offsets[i2]; k < A.row_offsets[i2 + 1]; ++k) {
        if (cost[k] == kInf) continue;
        const index_t j2 = A.col_indices[k];
        if (finalized[j2]) continue;
        const double nd = d + cost[k] - u[i2] - v[j2];
        if (nd < dist[j2]) {
          dist[j2] = nd;
          pred_row[j2] = i2;
          pq.push({nd, j2});
        }
      }
    }

    if (found_col == -1) {
      // The rows on the explored alternating paths form a Hall violator.
      std::vector<index_t> deficient{r};
      for (index_t j = 0; j < n; ++j) {
        if (finalized[j]) deficient.push_back(col_match[j]);
      }
      std::sort(deficient.begin(), deficient.end());
      throw StructurallySingularError(
          "structurally singular: no perfect matching, deficient row set of size " +
              std::to_string(deficient.size()) + " starting at row " + std::to_string(r),
          std::move(deficient));
    }

    // Dual update keeps reduced costs nonnegative.
    for (index_t j = 0; j < n; ++j) {
      if (finalized[j]) v[j] += dist[j] - found_dist;
    }

    // Augment: flip matches along the path ending at found_col.
    index_t j = found_col;
    while (true) {
      const index_t i = pred_row[j];
      col_match[j] = i;
      std::swap(row_match[i], j);
      if (i == r) break;
    }

    // Restore matched-arc equality u_i + v_j = c_ij for every row whose
    // column dual moved or whose match changed.
    for (index_t jj = 0; jj < n; ++jj) {
      if (!finalized[jj]) continue;
      const index_t i = col_match[jj];
      u[i] = cost[A.find(i, jj)] - v[jj];
    }
  }

  // Exact matched duals: u_i := c_{i,match(i)} - v_{match(i)} so the scaled
  // diagonal is 1 to a few ulps; feasibility of the other arcs carries the
  // Dijkstra roundoff only.
  MatchingResult result;
  result.matched_product = 0.0;
  for (index_t i = 0; i < n; ++i) {
    const index_t j = row_match[i];
    const index_t k = A.find(i, j);
    u[i] = cost[k] - v[j];
    result.matched_product += std::log(std::fabs(A.values[k]));
  }

  result.scaling.row_scale.resize(n);
  result.scaling.col_scale.resize(n);
  for (index_t i = 0; i < n; ++i) result.scaling.row_scale[i] = std::exp(u[i]);
  for (index_t j = 0; j < n; ++j) result.scaling.col_scale[j] = std::exp(v[j] - log_col_max[j]);
  result.scaling.validate();

  std::vector<index_t> forward(n);
  for (index_t i = 0; i < n; ++i) forward[row_match[i]] = i;
  result.col_perm = Permutation::from_forward(std::move(forward));
  return result;
}

}  // namespace rlu
