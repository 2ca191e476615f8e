#pragma once

#include <cstdint>
#include <vector>

#include "ust/tree_metrics.hpp"

namespace ust::detail {

// Transition kernel of the walk killed on the absorbing layer: from member u
// each of its degree(u) slots is taken with probability 1/degree(u), and
// absorbing slots lose the mass. Stored as a compacted member-to-member edge
// list for the iteration hot loop.
struct SubstochasticKernel {
  explicit SubstochasticKernel(const BallGraph& g) {
    const std::size_t n = g.size();
    size = n;
    inv_deg.resize(n);
    row_off.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) {
      inv_deg[u] = 1.0 / double(g.degree(u));
      std::int32_t live = 0;
      for (std::int32_t k = g.offset[u]; k < g.offset[u + 1]; ++k) {
        if (g.adj[std::size_t(k)] >= 0) ++live;
      }
      row_off[u + 1] = row_off[u] + live;
    }
    flat_to.resize(std::size_t(row_off.back()));
    std::size_t pos = 0;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::int32_t k = g.offset[u]; k < g.offset[u + 1]; ++k) {
        const std::int32_t w = g.adj[std::size_t(k)];
        if (w >= 0) flat_to[pos++] = w;
      }
    }
  }

  void step(const std::vector<double>& v, std::vector<double>& out) const {
    out.assign(size, 0.0);
    for (std::size_t u = 0; u < size; ++u) {
      const double s = v[u] * inv_deg[u];
      if (s == 0.0) continue;
      for (std::int32_t k = row_off[u]; k < row_off[u + 1]; ++k) {
        out[std::size_t(flat_to[std::size_t(k)])] += s;
      }
    }
  }

  std::size_t size = 0;
  std::vector<double> inv_deg;
  std::vector<std::int32_t> flat_to;
  std::vector<std::int32_t> row_off;
};

struct CollisionSeries {
  double diag_sum = 0.0;     // sum_n ||v_n||_2^2  (two-walk collision mean)
  double even_series = 0.0;  // sum_n v_{2n}(source)
  double g_series = 0.0;     // sum_n v_n(source)  (Green diagonal)
  std::vector<double> v_squared_sum;  // per-vertex sum_n v_n(x)^2
  std::int64_t steps = 0;
  double tail_fraction = 0.0;  // completed tail relative to diag_sum
};

// Runs v_{n+1} = v_n P from a point mass at `source`, accumulating the
// squared-mass series, the origin return series and (optionally) the
// per-vertex squared occupation sums. The loop stops once the two-step decay
// ratio has settled and the projected geometric tails fall below rel_tol of
// every accumulated total (with a 4x margin); the tails are then added, so
// the realized truncation error sits well under rel_tol. Throws
// TruncationError if max_steps is reached first.
CollisionSeries iterate_collision_series(const BallGraph& g, int source,
                                         double rel_tol, std::int64_t max_steps,
                                         bool need_vsq);

}  // namespace ust::detail
