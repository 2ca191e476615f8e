#include "ust/harness/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ust/collision.hpp"
#include "ust/network.hpp"
#include "ust/small_graph.hpp"
#include "ust/stats.hpp"
#include "ust/walk.hpp"
#include "ust/wilson.hpp"

namespace ust {

namespace {

// Literal textbook loop erasure: T(0) = sup{j : theta_j = theta_0},
// T(i) = sup{j : theta_j = theta_{T(i-1)+1}}, output theta_{T(i)} until the
// end of the path is reached. Quadratic, used as the oracle only.
LatticePath naive_loop_erase(const LatticePath& path) {
  LatticePath out;
  const auto& v = path.vertices;
  if (v.empty()) return out;
  const std::size_t k = v.size() - 1;
  std::size_t t = 0;
  LatticePoint target = v[0];
  while (true) {
    std::size_t last = t;
    for (std::size_t j = t; j < v.size(); ++j) {
      if (v[j] == target) last = j;
    }
    out.vertices.push_back(v[last]);
    if (last == k) break;
    t = last + 1;
    target = v[t];
  }
  return out;
}

bool paths_equal(const LatticePath& a, const LatticePath& b) {
  return a.vertices == b.vertices;
}

LatticePath production_loop_erase(const LatticePath& path, bool corrupt) {
  LatticePath out = loop_erase(path);
  if (corrupt && out.vertices.size() >= 3) {
    out.vertices.erase(out.vertices.begin() + 1);
  }
  return out;
}

BallGraph line_ball_graph() {
  // Path -1 - 0 - +1 with absorbing continuations on both ends.
  BallGraph g;
  g.members = {LatticePoint{0, 0, 0}, LatticePoint{-1, 0, 0}, LatticePoint{1, 0, 0}};
  g.depth = {0, 1, 1};
  g.offset = {0, 2, 4, 6};
  g.adj = {1, 2, 0, kAbsorbingSlot, 0, kAbsorbingSlot};
  g.boundary = {LatticePoint{-2, 0, 0}, LatticePoint{2, 0, 0}};
  g.source = 0;
  return g;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

PairChainMoments pair_chain_moments(const BallGraph& ball, double tol) {
  const std::size_t n = ball.size();
  std::vector<double> p(n * n, 0.0);  // row-major single-walk kernel
  for (std::size_t u = 0; u < n; ++u) {
    const double inv = 1.0 / double(ball.degree(u));
    for (std::int32_t k = ball.offset[u]; k < ball.offset[u + 1]; ++k) {
      const std::int32_t w = ball.adj[std::size_t(k)];
      if (w >= 0) p[u * n + std::size_t(w)] += inv;
    }
  }
  auto mat_mul = [&](const std::vector<double>& a, const std::vector<double>& b,
                     bool transpose_a, bool transpose_b) {
    std::vector<double> c(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double aik = transpose_a ? a[k * n + i] : a[i * n + k];
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          c[i * n + j] += aik * (transpose_b ? b[j * n + k] : b[k * n + j]);
        }
      }
    }
    return c;
  };

  // h(a,b) = expected future diagonal co-occupations (including now) for the
  // pair started at (a,b): fixed point of h = 1_diag + P h P^T.
  std::vector<double> h(n * n, 0.0);
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::vector<double> ph = mat_mul(p, h, false, false);
    std::vector<double> next = mat_mul(ph, p, false, true);
    for (std::size_t d = 0; d < n; ++d) next[d * n + d] += 1.0;
    double delta = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) delta = std::max(delta, std::fabs(next[i] - h[i]));
    h.swap(next);
    if (delta < tol) break;
  }

  // Pair distribution forward in time from (source, source).
  std::vector<double> u(n * n, 0.0);
  u[std::size_t(ball.source) * n + std::size_t(ball.source)] = 1.0;
  PairChainMoments out;
  for (int iter = 0; iter < 1'000'000; ++iter) {
    double diag = 0.0, diag_weighted = 0.0, mass = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      const double w = u[d * n + d];
      diag += w;
      diag_weighted += w * (2.0 * h[d * n + d] - 1.0);
    }
    out.ez += diag;
    out.ez2 += diag_weighted;
    for (double v : u) mass += v;
    if (mass < tol) break;
    const std::vector<double> pu = mat_mul(p, u, true, false);  // P^T U
    u = mat_mul(pu, p, false, false);                           // (P^T U) P
  }
  return out;
}

ValidationReport run_validation(std::uint64_t seed, int workers,
                                const std::string& inject_fault) {
  (void)workers;
  ValidationReport report;
  const bool corrupt_le = inject_fault == "loop_erase";
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
    report.all_passed = report.all_passed && ok;
  };

  {  // Exhaustive short walks: every direction sequence of length <= 4.
    bool ok = true;
    std::size_t checked = 0;
    for (int len = 0; len <= 4 && ok; ++len) {
      std::vector<int> dirs(std::size_t(len), 0);
      while (true) {
        LatticePath path;
        path.vertices.push_back(LatticePoint{});
        for (int d : dirs) path.vertices.push_back(step(path.vertices.back(), d));
        if (!paths_equal(production_loop_erase(path, corrupt_le), naive_loop_erase(path))) {
          ok = false;
          break;
        }
        ++checked;
        int pos = len - 1;
        while (pos >= 0 && dirs[std::size_t(pos)] == 5) {
          dirs[std::size_t(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
        ++dirs[std::size_t(pos)];
      }
    }
    add("loop_erase_exhaustive", ok, std::to_string(checked) + " paths");
  }

  {  // Random traces up to 200 steps against the textbook recursion.
    RngStream rng(seed, 0xA0);
    bool ok = true;
    const std::size_t trials = 20'000;
    for (std::size_t t = 0; t < trials && ok; ++t) {
      const std::size_t len = rng.uniform_below(201);
      LatticePath path;
      path.vertices.push_back(LatticePoint{});
      for (std::size_t i = 0; i < len; ++i) {
        path.vertices.push_back(step(path.vertices.back(), rng.uniform_dir()));
      }
      ok = paths_equal(production_loop_erase(path, corrupt_le), naive_loop_erase(path));
    }
    add("loop_erase_random_traces", ok, std::to_string(trials) + " traces");
  }

  {  // Matrix-tree counts on the reference graphs.
    const bool ok = spanning_tree_count(cycle_graph(4)) == 4 &&
                    spanning_tree_count(complete_graph(4)) == 16 &&
                    spanning_tree_count(path_graph(5)) == 1;
    add("matrix_tree_counts", ok, "C4=4 K4=16 P5=1");
  }

  for (const bool k4 : {false, true}) {  // Sampler uniformity via chi-square.
    const SmallGraph g = k4 ? complete_graph(4) : cycle_graph(4);
    const std::uint64_t expected_trees = spanning_tree_count(g);
    RngStream rng(seed, k4 ? 0xA2 : 0xA1);
    std::map<std::uint64_t, double> counts;
    const std::size_t samples = 30'000;
    for (std::size_t i = 0; i < samples; ++i) {
      const std::vector<int> parent = wilson_tree(g, 0, rng);
      counts[tree_edge_signature(g, parent)] += 1.0;
    }
    bool ok = counts.size() == expected_trees;
    std::vector<double> observed, expected;
    for (const auto& [sig, c] : counts) {
      observed.push_back(c);
      expected.push_back(double(samples) / double(expected_trees));
    }
    const double stat = chi_square_statistic(observed, expected);
    const double pval = chi_square_survival(stat, int(expected_trees) - 1);
    ok = ok && pval > 1e-3;
    for (double c : observed) {
      ok = ok && std::fabs(c / double(samples) - 1.0 / double(expected_trees)) < 0.015;
    }
    add(k4 ? "wilson_uniformity_k4" : "wilson_uniformity_cycle4", ok,
        "p=" + fmt(pval));
  }

  {  // Electrical identities on sampled balls.
    bool sweep_ok = true, green_ok = true;
    double worst_sweep = 0.0, worst_green = 0.0;
    WilsonConfig cfg;
    cfg.region_radius = 13;
    cfg.container_factor = 4.0;
    for (std::size_t i = 0; i < 12; ++i) {
      RngStream rng = RngStream(seed, 0xA3).child(i);
      const SpanningTree tree = wilson_infinity_approx(cfg, rng);
      const IntrinsicBall ball = intrinsic_ball(tree, LatticePoint{}, 12);
      const double r_sweep = resistance_tree(ball.graph, 0);
      int ground = 0;
      const SmallGraph net = to_small_graph(ball.graph, ground);
      const std::vector<int> set_a = {0};
      const std::vector<int> set_b = {ground};
      const double r_cg = resistance_general(net, set_a, set_b);
      worst_sweep = std::max(worst_sweep, std::fabs(r_sweep - r_cg) / r_cg);
      sweep_ok = sweep_ok && worst_sweep < 1e-9;
      const double g_electric = green_diagonal(ball.graph, 0);
      const double g_series_val = green_series(ball.graph, 0, 1e-10);
      worst_green = std::max(worst_green, std::fabs(g_electric - g_series_val) / g_series_val);
      green_ok = green_ok && worst_green < 1e-6;
    }
    add("resistance_tree_vs_laplacian", sweep_ok, "max rel diff " + fmt(worst_sweep));
    add("green_identity", green_ok, "max rel diff " + fmt(worst_green));
  }

  {  // Line ball: closed-form first moment and brute-force pair chain.
    const BallGraph line = line_ball_graph();
    MomentOptions opt;
    const ExactMoments em = exact_moments(line, opt);
    const PairChainMoments oracle = pair_chain_moments(line);
    const bool ez_ok = std::fabs(em.ez - 2.0) < 1e-10 && std::fabs(oracle.ez - 2.0) < 1e-9;
    const bool ez2_ok = em.ez2_exact && std::fabs(em.ez2 - oracle.ez2) < 1e-8;
    add("line_tree_collision_moments", ez_ok && ez2_ok,
        "ez=" + fmt(em.ez) + " ez2=" + fmt(em.ez2) + " oracle_ez2=" + fmt(oracle.ez2));
  }

  {  // Sampled small balls: spectral moments vs pair chain, both routes agree.
    bool oracle_ok = true, routes_ok = true;
    double worst_oracle = 0.0, worst_route = 0.0;
    WilsonConfig cfg;
    cfg.region_radius = 7;
    cfg.container_factor = 4.0;
    for (std::size_t i = 0; i < 5; ++i) {
      RngStream rng = RngStream(seed, 0xA4).child(i);
      const SpanningTree tree = wilson_infinity_approx(cfg, rng);
      const IntrinsicBall ball = intrinsic_ball(tree, LatticePoint{}, 6);
      MomentOptions spectral;
      spectral.route = MomentOptions::Route::Spectral;
      const ExactMoments em = exact_moments(ball.graph, spectral);
      const PairChainMoments oracle = pair_chain_moments(ball.graph);
      worst_oracle = std::max(worst_oracle,
                              std::fabs(em.ez - oracle.ez) / oracle.ez);
      worst_oracle = std::max(worst_oracle,
                              std::fabs(em.ez2 - oracle.ez2) / oracle.ez2);
      MomentOptions iterative;
      iterative.route = MomentOptions::Route::Iterative;
      const ExactMoments it = exact_moments(ball.graph, iterative);
      worst_route = std::max(worst_route, std::fabs(em.ez - it.ez) / em.ez);
      worst_route = std::max(worst_route,
                             std::fabs(em.even_series - it.even_series) / em.even_series);
      routes_ok = routes_ok && it.ez2 >= em.ez2 * (1.0 - 1e-9);  // bound dominates exact
    }
    oracle_ok = worst_oracle < 1e-8;
    routes_ok = routes_ok && worst_route < 1e-7;
    add("pair_chain_collision_moments", oracle_ok, "max rel diff " + fmt(worst_oracle));
    add("moment_routes_agree", routes_ok, "max rel diff " + fmt(worst_route));
  }

  {  // Determinism: tiny experiment, same seed, different worker counts.
    Theorem1Options opt;
    opt.r = 6;
    opt.trees = 4;
    opt.mc_runs = 64;
    opt.seed = seed;
    opt.workers = 1;
    const std::vector<MomentReport> a = theorem1_experiment(opt);
    opt.workers = 2;
    const std::vector<MomentReport> b = theorem1_experiment(opt);
    bool ok = a.size() == b.size();
    for (std::size_t i = 0; ok && i < a.size(); ++i) {
      ok = a[i].ez == b[i].ez && a[i].ez2 == b[i].ez2 && a[i].mc_ez == b[i].mc_ez &&
           a[i].r_eff_ur == b[i].r_eff_ur && a[i].ball_size == b[i].ball_size;
    }
    add("determinism_rerun", ok, "4 trees, workers 1 vs 2");
  }

  return report;
}

}  // namespace ust
