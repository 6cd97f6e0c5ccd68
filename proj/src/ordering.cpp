#include "rlu/ordering.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace rlu {

Permutation amd_order(const CsrMatrix& pattern) {
  if (pattern.nrows != pattern.ncols) throw DimensionError("amd_order: pattern must be square");
  const index_t n = pattern.nrows;

  // Quotient graph: per variable a list of variable neighbors and a list of
  // adjacent elements; per element the variable set it spans. An eliminated
  // variable p becomes element p spanning L_p; elements adjacent to p are
  // absorbed into it.
  std::vector<std::vector<index_t>> var_adj(n);
  std::vector<std::vector<index_t>> elem_adj(n);
  std::vector<std::vector<index_t>> elem_vars(n);
  std::vector<char> eliminated(n, 0);
  std::vector<char> elem_alive(n, 0);
  std::vector<index_t> degree(n, 0);

  for (index_t i = 0; i < n; ++i) {
    for (index_t k = pattern.row_offsets[i]; k < pattern.row_offsets[i + 1]; ++k) {
      const index_t j = pattern.col_indices[k];
      if (j != i) var_adj[i].push_back(j);
    }
    degree[i] = static_cast<index_t>(var_adj[i].size());
  }

  // (degree, vertex) ordering gives min approximate degree with
  // lowest-index tie-breaking.
  std::set<std::pair<index_t, index_t>> heap;
  for (index_t i = 0; i < n; ++i) heap.insert({degree[i], i});

  std::vector<index_t> mark(n, -1);
  std::vector<index_t> elem_stamp(n, -1);
  std::vector<index_t> elem_external(n, 0);  // |L_e \ L_p| for the current pivot
  std::vector<index_t> pivot_set;            // L_p
  std::vector<index_t> order(n);

  for (index_t step = 0; step < n; ++step) {
    const auto [deg_p, p] = *heap.begin();
    (void)deg_p;
    heap.erase(heap.begin());
    order[step] = p;
    eliminated[p] = 1;

    // L_p = (A_p  U  union of absorbed element spans) \ {p}.
    pivot_set.clear();
    mark[p] = step;
    for (index_t v : var_adj[p]) {
      if (!eliminated[v] && mark[v] != step) {
        mark[v] = step;
        pivot_set.push_back(v);
      }
    }
    for (index_t e : elem_adj[p]) {
      for (index_t v : elem_vars[e]) {
        if (mark[v] != step) {  // spans contain alive variables and p only
          mark[v] = step;
          pivot_set.push_back(v);
        }
      }
    }
    for (index_t e : elem_adj[p]) {
      elem_alive[e] = 0;
      elem_vars[e].clear();
      elem_vars[e].shrink_to_fit();
    }
    var_adj[p].clear();
    elem_adj[p].clear();
    std::sort(pivot_set.begin(), pivot_set.end());
    elem_vars[p] = pivot_set;
    elem_alive[p] = 1;

    // One pass computes |L_e \ L_p| for every live element touching L_p.
    for (index_t i : pivot_set) {
      for (index_t e : elem_adj[i]) {
        if (!elem_alive[e] || e == p) continue;
        if (elem_stamp[e] != step) {
          elem_stamp[e] = step;
          elem_external[e] = static_cast<index_t>(elem_vars[e].size());
        }
        elem_external[e]--;
      }
    }

    const index_t alive_after = n - step - 1;
    const index_t lp_minus_self = static_cast<index_t>(pivot_set.size()) - 1;
    for (index_t i : pivot_set) {
      // Prune: neighbors now covered by element p, and absorbed elements.
      auto& av = var_adj[i];
      av.erase(std::remove_if(av.begin(), av.end(),
                              [&](index_t v) { return v == p || mark[v] == step; }),
               av.end());
      auto& ae = elem_adj[i];
      ae.erase(std::remove_if(ae.begin(), ae.end(), [&](index_t e) { return !elem_alive[e]; }),
               ae.end());
      ae.push_back(p);

      index_t external_sum = 0;
      for (index_t e : ae) {
        if (e == p) continue;
        external_sum += (elem_stamp[e] == step) ? elem_external[e]
                                                : static_cast<index_t>(elem_vars[e].size());
      }
      const index_t bound_world = std::max<index_t>(alive_after - 1, 0);
      const index_t bound_prev = degree[i] + lp_minus_self;
      const index_t bound_sets = static_cast<index_t>(av.size()) + lp_minus_self + external_sum;
      const index_t nd = std::min({bound_world, bound_prev, bound_sets});
      heap.erase({degree[i], i});
      degree[i] = nd;
      heap.insert({nd, i});
    }
  }

  std::vector<index_t> forward(n);
  for (index_t k = 0; k < n; ++k) forward[order[k]] = k;
  return Permutation::from_forward(std::move(forward));
}

}  // namespace rlu
