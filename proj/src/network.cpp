#include "ust/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ust/detail/substochastic.hpp"

namespace ust {

namespace {

struct Csr {
  std::vector<std::int32_t> adj;
  std::vector<std::int32_t> off;
};

Csr build_csr(const SmallGraph& g) {
  const std::size_t n = std::size_t(g.vertex_count());
  Csr csr;
  csr.off.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) {
    csr.off[u + 1] = csr.off[u] + std::int32_t(g.adjacency[u].size());
  }
  csr.adj.resize(std::size_t(csr.off.back()));
  std::size_t pos = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (int v : g.adjacency[u]) csr.adj[pos++] = v;
  }
  return csr;
}

}  // namespace

double resistance_general(const SmallGraph& g, std::span<const int> set_a,
                          std::span<const int> set_b, double rel_residual) {
  const int n = g.vertex_count();
  if (set_a.empty() || set_b.empty()) {
    throw std::invalid_argument("resistance_general: empty terminal set");
  }
  std::vector<std::int8_t> role(std::size_t(n), 0);  // 0 interior, 1 in A, 2 in B
  for (int v : set_a) role[std::size_t(v)] = 1;
  for (int v : set_b) {
    if (role[std::size_t(v)] == 1) {
      throw std::invalid_argument("resistance_general: terminal sets overlap");
    }
    role[std::size_t(v)] = 2;
  }

  // Connectivity of A to B.
  {
    std::vector<char> seen(std::size_t(n), 0);
    std::vector<int> stack(set_a.begin(), set_a.end());
    for (int v : set_a) seen[std::size_t(v)] = 1;
    bool reached = false;
    while (!stack.empty() && !reached) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : g.adjacency[std::size_t(u)]) {
        if (role[std::size_t(w)] == 2) {
          reached = true;
          break;
        }
        if (!seen[std::size_t(w)]) {
          seen[std::size_t(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    if (!reached) return std::numeric_limits<double>::infinity();
  }

  const Csr csr = build_csr(g);
  std::vector<double> f(std::size_t(n), 0.0);
  for (int v : set_a) f[std::size_t(v)] = 1.0;

  std::vector<std::int32_t> unknown;
  for (int v = 0; v < n; ++v) {
    if (role[std::size_t(v)] == 0) unknown.push_back(v);
  }

  if (!unknown.empty()) {
    std::vector<std::int32_t> slot(std::size_t(n), -1);
    for (std::size_t i = 0; i < unknown.size(); ++i) slot[std::size_t(unknown[i])] = std::int32_t(i);
    const std::size_t m = unknown.size();
    std::vector<double> diag(m), rhs(m, 0.0), x(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const int u = unknown[i];
      diag[i] = double(csr.off[u + 1] - csr.off[u]);
      for (std::int32_t k = csr.off[u]; k < csr.off[u + 1]; ++k) {
        if (role[std::size_t(csr.adj[std::size_t(k)])] == 1) rhs[i] += 1.0;
      }
    }
    // Jacobi-preconditioned conjugate gradients on the interior Laplacian.
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
      for (std::size_t i = 0; i < m; ++i) {
        const int u = unknown[i];
        double acc = diag[i] * in[i];
        for (std::int32_t k = csr.off[u]; k < csr.off[u + 1]; ++k) {
          const std::int32_t w = csr.adj[std::size_t(k)];
          const std::int32_t j = slot[std::size_t(w)];
          if (j >= 0) acc -= in[std::size_t(j)];
        }
        out[i] = acc;
      }
    };
    std::vector<double> residual = rhs, z(m), p(m), ap(m);
    double rhs_norm = 0.0;
    for (double v : rhs) rhs_norm += v * v;
    rhs_norm = std::sqrt(rhs_norm);
    if (rhs_norm > 0.0) {
      for (std::size_t i = 0; i < m; ++i) z[i] = residual[i] / diag[i];
      p = z;
      double rz = 0.0;
      for (std::size_t i = 0; i < m; ++i) rz += residual[i] * z[i];
      const std::size_t max_iter = 60 * m + 200;
      for (std::size_t it = 0; it < max_iter; ++it) {
        double rnorm = 0.0;
        for (double v : residual) rnorm += v * v;
        if (std::sqrt(rnorm) <= rel_residual * rhs_norm) break;
        apply(p, ap);
        double pap = 0.0;
        for (std::size_t i = 0; i < m; ++i) pap += p[i] * ap[i];
        if (pap <= 0.0) break;
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < m; ++i) {
          x[i] += alpha * p[i];
          residual[i] -= alpha * ap[i];
        }
        for (std::size_t i = 0; i < m; ++i) z[i] = residual[i] / diag[i];
        double rz_next = 0.0;
        for (std::size_t i = 0; i < m; ++i) rz_next += residual[i] * z[i];
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
      }
    }
    for (std::size_t i = 0; i < m; ++i) f[std::size_t(unknown[i])] = x[i];
  }

  double energy = 0.0;
  for (const auto& [u, v] : g.edges) {
    const double d = f[std::size_t(u)] - f[std::size_t(v)];
    energy += d * d;
  }
  if (energy <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / energy;
}

namespace {

// BFS order and parents of the member tree, rooted at `source`.
struct RootedOrder {
  std::vector<std::int32_t> order;
  std::vector<std::int32_t> parent;
};

RootedOrder root_at(const BallGraph& g, int source) {
  RootedOrder ro;
  const std::size_t n = g.size();
  ro.parent.assign(n, -2);
  ro.order.reserve(n);
  ro.order.push_back(source);
  ro.parent[std::size_t(source)] = -1;
  for (std::size_t head = 0; head < ro.order.size(); ++head) {
    const std::int32_t u = ro.order[head];
    for (std::int32_t k = g.offset[std::size_t(u)]; k < g.offset[std::size_t(u) + 1]; ++k) {
      const std::int32_t w = g.adj[std::size_t(k)];
      if (w >= 0 && ro.parent[std::size_t(w)] == -2) {
        ro.parent[std::size_t(w)] = u;
        ro.order.push_back(w);
      }
    }
  }
  return ro;
}

int absorbing_edge_count(const BallGraph& g, std::size_t u) {
  int c = 0;
  for (std::int32_t k = g.offset[u]; k < g.offset[u + 1]; ++k) {
    if (g.adj[std::size_t(k)] == kAbsorbingSlot) ++c;
  }
  return c;
}

}  // namespace

double resistance_tree(const BallGraph& g, int source) {
  const RootedOrder ro = root_at(g, source);
  const std::size_t n = g.size();
  std::vector<double> down(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) down[u] = double(absorbing_edge_count(g, u));
  for (std::size_t i = n; i-- > 1;) {
    const std::int32_t u = ro.order[i];
    const double d = down[std::size_t(u)];
    down[std::size_t(ro.parent[std::size_t(u)])] += d / (1.0 + d);
  }
  const double total = down[std::size_t(source)];
  if (total <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / total;
}

double resistance_tree_to_members(const BallGraph& g, int source,
                                  std::span<const int> absorbing_members) {
  std::vector<char> absorbing(g.size(), 0);
  for (int v : absorbing_members) absorbing[std::size_t(v)] = 1;
  if (absorbing[std::size_t(source)]) return 0.0;
  const RootedOrder ro = root_at(g, source);
  const std::size_t n = g.size();
  std::vector<double> down(n, 0.0);
  for (std::size_t i = n; i-- > 1;) {
    const std::int32_t u = ro.order[i];
    const std::int32_t p = ro.parent[std::size_t(u)];
    if (absorbing[std::size_t(u)]) {
      down[std::size_t(p)] += 1.0;  // grounded at distance one; beyond is inert
    } else {
      const double d = down[std::size_t(u)];
      down[std::size_t(p)] += d / (1.0 + d);
    }
  }
  const double total = down[std::size_t(source)];
  if (total <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / total;
}

std::vector<double> resistance_all_members(const BallGraph& g) {
  const RootedOrder ro = root_at(g, g.source);
  const std::size_t n = g.size();
  std::vector<double> down(n, 0.0), up(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) down[u] = double(absorbing_edge_count(g, u));
  for (std::size_t i = n; i-- > 1;) {
    const std::int32_t u = ro.order[i];
    const double d = down[std::size_t(u)];
    down[std::size_t(ro.parent[std::size_t(u)])] += d / (1.0 + d);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const std::int32_t u = ro.order[i];
    const std::int32_t p = ro.parent[std::size_t(u)];
    const double through_u = down[std::size_t(u)] / (1.0 + down[std::size_t(u)]);
    const double rest = up[std::size_t(p)] + down[std::size_t(p)] - through_u;
    up[std::size_t(u)] = rest > 0.0 ? rest / (1.0 + rest) : 0.0;
  }
  std::vector<double> r(n);
  for (std::size_t u = 0; u < n; ++u) {
    const double c = down[u] + up[u];
    r[u] = c > 0.0 ? 1.0 / c : std::numeric_limits<double>::infinity();
  }
  return r;
}

double green_diagonal(const BallGraph& g, int x) {
  return double(g.degree(std::size_t(x))) * resistance_tree(g, x);
}

double green_series(const BallGraph& g, int x, double rel_tol) {
  return detail::iterate_collision_series(g, x, rel_tol, 200'000'000, false).g_series;
}

SmallGraph to_small_graph(const BallGraph& g, int& ground_vertex) {
  const int n = int(g.size());
  SmallGraph out(n + 1);
  ground_vertex = n;
  for (int u = 0; u < n; ++u) {
    for (std::int32_t k = g.offset[std::size_t(u)]; k < g.offset[std::size_t(u) + 1]; ++k) {
      const std::int32_t w = g.adj[std::size_t(k)];
      if (w == kAbsorbingSlot) {
        out.add_edge(u, n);
      } else if (w > u) {
        out.add_edge(u, int(w));  // each member edge once
      }
    }
  }
  return out;
}

ResistanceReport resistance_profile(const SpanningTree& tree, std::int64_t r) {
  ResistanceReport report;
  report.r = r;
  const IntrinsicBall ball = intrinsic_ball(tree, LatticePoint{}, r);
  const TreeComponent ur = component_ur(tree, r);
  report.r_eff_origin = resistance_tree(ball.graph, ball.graph.source);
  report.r_eff_ur = resistance_tree(ur.graph, ur.graph.source);
  report.mu_origin = ball.graph.degree(std::size_t(ball.graph.source));
  report.green_origin = double(report.mu_origin) * report.r_eff_origin;
  report.ball_size = ball.graph.size();
  report.ur_size = ur.graph.size();
  report.ur_intrinsic_radius = ur.intrinsic_radius;
  return report;
}

}  // namespace ust
