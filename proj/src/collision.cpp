#include "ust/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ust/detail/substochastic.hpp"
#include "ust/harness/parallel.hpp"
#include "ust/network.hpp"
#include "ust/stats.hpp"

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a,
             const int* lda, double* w, double* work, const int* lwork, int* iwork,
             const int* liwork, int* info);
void dgemm_(const char* transa, const char* transb, const int* m, const int* n,
            const int* k, const double* alpha, const double* a, const int* lda,
            const double* b, const int* ldb, const double* beta, double* c,
            const int* ldc);
}

namespace ust {

void step_killed_walk(KilledWalkState& state, const BallGraph& ball, RngStream& rng) {
  if (!state.alive()) return;
  const std::size_t u = std::size_t(state.position);
  const std::int32_t row = ball.offset[u];
  const std::int32_t deg = ball.offset[u + 1] - row;
  state.position = ball.adj[std::size_t(row + std::int32_t(rng.uniform_below(std::uint32_t(deg))))];
  ++state.step_count;
}

CollisionSample sample_Z_with_streams(const BallGraph& ball, RngStream walk_x,
                                      RngStream walk_y) {
  KilledWalkState x{std::int32_t(ball.source), 0};
  KilledWalkState y{std::int32_t(ball.source), 0};
  CollisionSample out;
  std::int64_t now = 0;
  while (true) {
    if (x.alive() && y.alive() && x.position == y.position) ++out.z;
    if (!x.alive() && !y.alive()) break;
    if (x.alive()) {
      step_killed_walk(x, ball, walk_x);
      if (!x.alive()) out.lifetime_x = now + 1;
    }
    if (y.alive()) {
      step_killed_walk(y, ball, walk_y);
      if (!y.alive()) out.lifetime_y = now + 1;
    }
    ++now;
  }
  return out;
}

CollisionSample sample_Z(const BallGraph& ball, const RngStream& rng) {
  return sample_Z_with_streams(ball, rng.child(1), rng.child(2));
}

McCollisionStats mc_collision(const BallGraph& ball, std::size_t runs,
                              const RngStream& base, bool keep_values) {
  McCollisionStats stats;
  stats.runs = runs;
  if (runs == 0) return stats;
  std::vector<double> z(runs), z2(runs);
  if (keep_values) stats.z_values.resize(runs);
  for (std::size_t k = 0; k < runs; ++k) {
    const CollisionSample s = sample_Z(ball, base.child2(kMcRunTag, k));
    z[k] = double(s.z);
    z2[k] = double(s.z) * double(s.z);
    if (keep_values) stats.z_values[k] = s.z;
  }
  const MeanStats mz = mean_stats(z);
  const MeanStats mz2 = mean_stats(z2);
  stats.mean_z = mz.mean;
  stats.se_z = mz.std_error;
  stats.mean_z2 = mz2.mean;
  stats.se_z2 = mz2.std_error;
  return stats;
}

namespace {

struct SpectralWork {
  std::vector<double> eigenvalues;
  std::vector<double> psi;  // n x n, column-major eigenvectors
};

// Dense symmetric eigensolve of S = D^{1/2} P D^{-1/2} for the killed
// kernel. S[u][w] = 1/sqrt(deg u * deg w) on member-member tree edges.
SpectralWork spectral_decompose(const BallGraph& g) {
  const int n = int(g.size());
  SpectralWork work;
  work.eigenvalues.assign(std::size_t(n), 0.0);
  work.psi.assign(std::size_t(n) * std::size_t(n), 0.0);
  for (int u = 0; u < n; ++u) {
    const double du = double(g.degree(std::size_t(u)));
    for (std::int32_t k = g.offset[std::size_t(u)]; k < g.offset[std::size_t(u) + 1]; ++k) {
      const std::int32_t w = g.adj[std::size_t(k)];
      if (w < 0) continue;
      const double dw = double(g.degree(std::size_t(w)));
      work.psi[std::size_t(u) + std::size_t(n) * std::size_t(w)] = 1.0 / std::sqrt(du * dw);
    }
  }
  int lwork = -1, liwork = -1, info = 0;
  double work_query = 0.0;
  int iwork_query = 0;
  dsyevd_("V", "L", &n, work.psi.data(), &n, work.eigenvalues.data(), &work_query,
          &lwork, &iwork_query, &liwork, &info);
  lwork = int(work_query);
  liwork = iwork_query;
  std::vector<double> wbuf(static_cast<std::size_t>(lwork), 0.0);
  std::vector<int> ibuf(static_cast<std::size_t>(liwork), 0);
  dsyevd_("V", "L", &n, work.psi.data(), &n, work.eigenvalues.data(), wbuf.data(),
          &lwork, ibuf.data(), &liwork, &info);
  if (info != 0) throw std::runtime_error("dsyevd failed on the killed kernel");
  return work;
}

ExactMoments exact_moments_spectral(const BallGraph& g, const MomentOptions& opt) {
  const std::size_t n = g.size();
  const int ni = int(n);
  SpectralWork sw = spectral_decompose(g);
  const double* lam = sw.eigenvalues.data();
  const double* psi = sw.psi.data();

  const double lam_max = std::max(std::fabs(lam[0]), std::fabs(lam[n - 1]));
  if (lam_max >= 1.0) {
    throw TruncationError("exact_moments: kernel not strictly substochastic");
  }

  const int src = g.source;
  std::vector<double> mu(n);
  for (std::size_t u = 0; u < n; ++u) mu[u] = double(g.degree(u));
  const double mu0 = mu[std::size_t(src)];

  // phi_i = psi_i(source)
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = psi[std::size_t(src) + n * i];

  ExactMoments out;
  out.route = "spectral";
  for (std::size_t i = 0; i < n; ++i) {
    const double p2 = phi[i] * phi[i];
    out.even_series += p2 / (1.0 - lam[i] * lam[i]);
    out.g_series += p2 / (1.0 - lam[i]);
  }

  // M = Psi^T D Psi, then fold in F_ij = 1/(1 - lam_i lam_j).
  std::vector<double> scaled(n * n), m_mat(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t u = 0; u < n; ++u) scaled[u + n * j] = mu[u] * psi[u + n * j];
  }
  const double one = 1.0, zero = 0.0;
  dgemm_("T", "N", &ni, &ni, &ni, &one, psi, &ni, scaled.data(), &ni, &zero,
         m_mat.data(), &ni);

  double ez = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double f = 1.0 / (1.0 - lam[i] * lam[j]);
      m_mat[i + n * j] *= f;
      ez += phi[i] * phi[j] * m_mat[i + n * j];
    }
  }
  ez /= mu0;
  out.ez = ez;

  // A(x) = (Psi (M o F) Psi^T)[x,x] / mu(x): expected collisions for a pair
  // started at x. Reuse `scaled` for the product.
  dgemm_("N", "N", &ni, &ni, &ni, &one, psi, &ni, m_mat.data(), &ni, &zero,
         scaled.data(), &ni);
  std::vector<double> a_diag(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      a_diag[x] += scaled[x + n * j] * psi[x + n * j];
    }
  }
  for (std::size_t x = 0; x < n; ++x) a_diag[x] /= mu[x];

  // V(0,x) = (mu(x)/mu(0)) (Psi (phi phi^T o F) Psi^T)[x,x]
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      m_mat[i + n * j] = phi[i] * phi[j] / (1.0 - lam[i] * lam[j]);
    }
  }
  dgemm_("N", "N", &ni, &ni, &ni, &one, psi, &ni, m_mat.data(), &ni, &zero,
         scaled.data(), &ni);
  std::vector<double> v_diag(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      v_diag[x] += scaled[x + n * j] * psi[x + n * j];
    }
  }
  double ez2 = ez;
  for (std::size_t x = 0; x < n; ++x) {
    v_diag[x] *= mu[x] / mu0;
    ez2 += 2.0 * v_diag[x] * (a_diag[x] - 1.0);
  }
  out.ez2 = ez2;
  out.ez2_exact = true;
  (void)opt;
  return out;
}

ExactMoments exact_moments_iterative(const BallGraph& g, const MomentOptions& opt) {
  detail::CollisionSeries series =
      detail::iterate_collision_series(g, g.source, opt.rel_tol, opt.max_iterations, true);
  ExactMoments out;
  out.route = "iterative";
  out.ez = series.diag_sum;
  out.even_series = series.even_series;
  out.g_series = series.g_series;
  out.iterations = series.steps;

  // Certified bound: a pair started at x collides at most (6/mu) G(x,x)
  // = 6 R(x <-> exits) times in expectation.
  const std::vector<double> r_all = resistance_all_members(g);
  double bound = series.diag_sum;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double slack = 6.0 * r_all[x] - 1.0;
    if (slack > 0.0) bound += 2.0 * series.v_squared_sum[x] * slack;
  }
  out.ez2 = bound;
  out.ez2_exact = false;
  return out;
}

}  // namespace

ExactMoments exact_moments(const BallGraph& ball, const MomentOptions& opt) {
  if (ball.size() > opt.member_cap) throw BallTooLarge(ball.size(), opt.member_cap);
  ExactMoments out;
  const bool spectral =
      opt.route == MomentOptions::Route::Spectral ||
      (opt.route == MomentOptions::Route::Auto && ball.size() <= opt.spectral_cap);
  if (spectral) {
    out = exact_moments_spectral(ball, opt);
  } else {
    out = exact_moments_iterative(ball, opt);
  }
  out.green_electric =
      double(ball.degree(std::size_t(ball.source))) * resistance_tree(ball, ball.source);
  const std::vector<double> r_all = resistance_all_members(ball);
  for (std::size_t x = 0; x < ball.size(); ++x) {
    out.max_green_diag = std::max(out.max_green_diag, double(ball.degree(x)) * r_all[x]);
  }
  return out;
}

std::vector<MomentReport> theorem1_experiment(const Theorem1Options& opt,
                                              Theorem1Summary* summary) {
  const std::int64_t r = opt.r;
  WilsonConfig cfg;
  cfg.region_radius = r + 1;
  cfg.container_factor = opt.container_factor;
  cfg.validate();
  const std::vector<LatticePoint> order =
      spiral_order(Box{LatticePoint{}, cfg.region_radius, Norm::L2});

  std::vector<MomentReport> reports(opt.trees);
  parallel_for(opt.trees, opt.workers, [&](std::size_t i) {
    const RngStream tree_rng(opt.seed, i);
    RngStream sampler = tree_rng.child(0);
    const SpanningTree tree = wilson_infinity_approx(cfg, sampler, &order);
    const IntrinsicBall ball = intrinsic_ball(tree, LatticePoint{}, r);
    const TreeComponent ur = component_ur(tree, r);

    MomentReport rep;
    rep.tree_index = i;
    rep.r = r;
    rep.ball_size = ball.graph.size();
    rep.ur_size = ur.graph.size();
    rep.ur_intrinsic_radius = ur.intrinsic_radius;
    rep.mu_origin = ball.graph.degree(std::size_t(ball.graph.source));

    const ExactMoments em = exact_moments(ball.graph, opt.moments);
    rep.ez = em.ez;
    rep.ez2 = em.ez2;
    rep.ez2_exact = em.ez2_exact;
    rep.even_series = em.even_series;
    rep.g_series = em.g_series;
    rep.green_electric = em.green_electric;
    rep.max_green_diag = em.max_green_diag;
    rep.r_eff_origin = resistance_tree(ball.graph, ball.graph.source);
    rep.r_eff_ur = resistance_tree(ur.graph, ur.graph.source);

    const McCollisionStats mc =
        mc_collision(ball.graph, opt.mc_runs, tree_rng.child(1), true);
    rep.mc_ez = mc.mean_z;
    rep.mc_ez_se = mc.se_z;
    rep.mc_ez2 = mc.mean_z2;
    rep.mc_ez2_se = mc.se_z2;
    rep.mc_runs = mc.runs;

    const double rp1 = double(r + 1);
    const double guard = 1.0 + 1e-12;
    rep.upper_first_ok = rep.ez <= 6.0 * rp1 * guard;
    rep.upper_second_ok = rep.ez2 <= (144.0 * rp1 * rp1 + 6.0 * rp1) * guard;
    rep.lower_ok.resize(opt.eps_grid.size());
    rep.window_prob.resize(opt.eps_grid.size());
    rep.window_se.resize(opt.eps_grid.size());
    for (std::size_t e = 0; e < opt.eps_grid.size(); ++e) {
      const double eps = opt.eps_grid[e];
      rep.lower_ok[e] = rep.ez >= eps * double(r) ? 1 : 0;
      const double lo = eps * double(r);
      const double hi = 72.0 / (eps * eps) * double(r);
      std::size_t hits = 0;
      for (std::int64_t z : mc.z_values) {
        if (double(z) >= lo && double(z) <= hi) ++hits;
      }
      const double p = mc.runs ? double(hits) / double(mc.runs) : 0.0;
      rep.window_prob[e] = p;
      rep.window_se[e] = mc.runs ? std::sqrt(p * (1.0 - p) / double(mc.runs)) : 0.0;
    }
    reports[i] = std::move(rep);
  });

  if (summary != nullptr) {
    Theorem1Summary s;
    s.eps_grid = opt.eps_grid;
    s.trees = opt.trees;
    s.lower_failures.assign(opt.eps_grid.size(), 0);
    s.lower_failure_fraction.assign(opt.eps_grid.size(), 0.0);
    s.window_trees.assign(opt.eps_grid.size(), 0);
    s.window_prob.assign(opt.eps_grid.size(), 0.0);
    s.window_se.assign(opt.eps_grid.size(), 0.0);
    s.window_threshold.assign(opt.eps_grid.size(), 0.0);
    s.window_min_prob.assign(opt.eps_grid.size(),
                             std::numeric_limits<double>::infinity());
    s.window_min_prob_se.assign(opt.eps_grid.size(), 0.0);
    for (const MomentReport& rep : reports) {
      if (!rep.upper_first_ok) ++s.upper_first_violations;
      if (!rep.upper_second_ok) ++s.upper_second_violations;
      for (std::size_t e = 0; e < opt.eps_grid.size(); ++e) {
        if (!rep.lower_ok[e]) {
          ++s.lower_failures[e];
          continue;
        }
        ++s.window_trees[e];
        s.window_prob[e] += rep.window_prob[e];
        s.window_se[e] += rep.window_se[e] * rep.window_se[e];
        if (rep.window_prob[e] < s.window_min_prob[e]) {
          s.window_min_prob[e] = rep.window_prob[e];
          s.window_min_prob_se[e] = rep.window_se[e];
        }
      }
    }
    for (std::size_t e = 0; e < opt.eps_grid.size(); ++e) {
      s.window_threshold[e] = opt.eps_grid[e] * opt.eps_grid[e] / 12.0;
      s.lower_failure_fraction[e] =
          opt.trees ? double(s.lower_failures[e]) / double(opt.trees) : 0.0;
      if (s.window_trees[e] > 0) {
        s.window_prob[e] /= double(s.window_trees[e]);
        s.window_se[e] = std::sqrt(s.window_se[e]) / double(s.window_trees[e]);
      } else {
        s.window_min_prob[e] = 0.0;
      }
    }
    *summary = std::move(s);
  }
  return reports;
}

std::vector<CollisionDemoRow> infinite_collision_demo(
    const SpanningTree& tree, double eps, const std::vector<std::int64_t>& n_values,
    std::size_t runs, const RngStream& rng) {
  if (eps <= 0.0 || eps > 1.0) throw InvalidConfig("infinite_collision_demo: bad eps");
  std::vector<CollisionDemoRow> rows;
  rows.reserve(n_values.size());
  for (std::size_t idx = 0; idx < n_values.size(); ++idx) {
    const std::int64_t n_target = n_values[idx];
    CollisionDemoRow row;
    row.n_target = n_target;
    row.radius = std::int64_t(std::ceil(double(n_target) / eps));
    row.runs = runs;
    row.threshold = eps * eps / 12.0;
    const IntrinsicBall ball = intrinsic_ball(tree, LatticePoint{}, row.radius);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < runs; ++k) {
      const CollisionSample s = sample_Z(ball.graph, rng.child2(idx, k));
      if (s.z >= n_target) ++hits;
    }
    row.p_hat = runs ? double(hits) / double(runs) : 0.0;
    row.se = runs ? std::sqrt(row.p_hat * (1.0 - row.p_hat) / double(runs)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ust
