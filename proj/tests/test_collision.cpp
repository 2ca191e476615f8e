#include <doctest.h>

#include <cmath>
#include <map>

#include "support/oracles.hpp"
#include "ust/collision.hpp"
#include "ust/harness/validate.hpp"
#include "ust/network.hpp"
#include "ust/stats.hpp"

using namespace ust;

namespace {

IntrinsicBall sampled_ball(std::int64_t r, std::uint64_t seed, std::uint64_t stream) {
  WilsonConfig cfg;
  cfg.region_radius = r + 1;
  cfg.container_factor = 4.0;
  RngStream rng(seed, stream);
  const SpanningTree tree = wilson_infinity_approx(cfg, rng);
  return intrinsic_ball(tree, LatticePoint{}, r);
}

}  // namespace

TEST_CASE("killed walk: cemetery is absorbing") {
  const BallGraph g = testing::line_ball();
  KilledWalkState state{kCemetery, 0};
  RngStream rng(80, 0);
  step_killed_walk(state, g, rng);
  CHECK(state.position == kCemetery);
  CHECK(state.step_count == 0);
}

TEST_CASE("killed walk dies immediately on the single-vertex ball") {
  const BallGraph g = testing::single_ball(4);
  RngStream rng(81, 0);
  for (int i = 0; i < 100; ++i) {
    KilledWalkState state{0, 0};
    step_killed_walk(state, g, rng);
    CHECK(state.position == kCemetery);
    CHECK(state.step_count == 1);
  }
}

TEST_CASE("killed walk one-step distribution is uniform at a degree-3 vertex") {
  const BallGraph g = testing::star_ball(3);
  RngStream rng(82, 0);
  std::array<std::int64_t, 3> counts{};
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    KilledWalkState state{0, 0};
    step_killed_walk(state, g, rng);
    REQUIRE(state.position >= 1);
    REQUIRE(state.position <= 3);
    ++counts[std::size_t(state.position - 1)];
  }
  const double sigma = std::sqrt(double(n) * (1.0 / 3.0) * (2.0 / 3.0));
  for (int k = 0; k < 3; ++k) {
    CHECK(std::fabs(double(counts[std::size_t(k)]) - n / 3.0) < 4.0 * sigma);
  }
}

TEST_CASE("collision count on the single-vertex ball is always one") {
  const BallGraph g = testing::single_ball(3);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const CollisionSample sample = sample_Z(g, RngStream(83, s));
    CHECK(sample.z == 1);
    CHECK(sample.lifetime_x == 1);
    CHECK(sample.lifetime_y == 1);
  }
}

TEST_CASE("collision count is at least one and bounded by lifetimes") {
  const IntrinsicBall ball = sampled_ball(6, 84, 0);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const CollisionSample sample = sample_Z(ball.graph, RngStream(85, s));
    CHECK(sample.z >= 1);
    CHECK(sample.z <= std::min(sample.lifetime_x, sample.lifetime_y));
  }
}

TEST_CASE("line ball Monte Carlo mean is near the exact value two") {
  const BallGraph g = testing::line_ball();
  const McCollisionStats stats = mc_collision(g, 20'000, RngStream(86, 0));
  CHECK(std::fabs(stats.mean_z - 2.0) < 3.0 * stats.se_z);
}

TEST_CASE("exact moments on the single-vertex ball") {
  const BallGraph g = testing::single_ball(5);
  const ExactMoments em = exact_moments(g);
  CHECK(em.ez == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(em.ez2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(em.ez2_exact);
  CHECK(em.even_series == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(em.green_electric == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact moments on the line ball match closed forms and the pair chain") {
  const BallGraph g = testing::line_ball();
  const ExactMoments em = exact_moments(g);
  CHECK(em.ez == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(em.even_series == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(em.green_electric == doctest::Approx(2.0).epsilon(1e-12));
  const PairChainMoments oracle = pair_chain_moments(g);
  CHECK(oracle.ez == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(em.ez2 == doctest::Approx(oracle.ez2).epsilon(1e-9));
}

TEST_CASE("spectral moments match the pair-chain oracle on small sampled balls") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const IntrinsicBall ball = sampled_ball(5, 87, s);
    MomentOptions opt;
    opt.route = MomentOptions::Route::Spectral;
    const ExactMoments em = exact_moments(ball.graph, opt);
    const PairChainMoments oracle = pair_chain_moments(ball.graph);
    CHECK(em.ez == doctest::Approx(oracle.ez).epsilon(1e-8));
    CHECK(em.ez2 == doctest::Approx(oracle.ez2).epsilon(1e-7));
  }
}

TEST_CASE("iterative and spectral routes agree; the bound dominates") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const IntrinsicBall ball = sampled_ball(8, 88, s);
    MomentOptions spectral, iterative;
    spectral.route = MomentOptions::Route::Spectral;
    iterative.route = MomentOptions::Route::Iterative;
    const ExactMoments a = exact_moments(ball.graph, spectral);
    const ExactMoments b = exact_moments(ball.graph, iterative);
    CHECK(a.ez == doctest::Approx(b.ez).epsilon(1e-8));
    CHECK(a.even_series == doctest::Approx(b.even_series).epsilon(1e-8));
    CHECK(a.g_series == doctest::Approx(b.g_series).epsilon(1e-8));
    CHECK(b.ez2 >= a.ez2 * (1.0 - 1e-9));
    CHECK(a.ez2_exact);
    CHECK(!b.ez2_exact);
  }
}

TEST_CASE("even-time return series equals the Green diagonal on trees") {
  // Odd-time returns vanish on bipartite graphs, so the even series is the
  // whole Green series; both identities are checked against the electrical
  // value.
  for (std::uint64_t s = 0; s < 4; ++s) {
    const IntrinsicBall ball = sampled_ball(7, 89, s);
    const ExactMoments em = exact_moments(ball.graph);
    CHECK(em.even_series == doctest::Approx(em.g_series).epsilon(1e-9));
    CHECK(em.even_series == doctest::Approx(em.green_electric).epsilon(1e-6));
    CHECK(em.even_series >= 0.5 * em.green_electric - 1e-9);
    CHECK(em.even_series <= em.green_electric * (1.0 + 1e-6));
  }
}

TEST_CASE("Monte Carlo means agree with exact moments within four standard errors") {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const IntrinsicBall ball = sampled_ball(10, 90, s);
    const ExactMoments em = exact_moments(ball.graph);
    const McCollisionStats mc = mc_collision(ball.graph, 10'000, RngStream(91, s));
    CHECK(std::fabs(mc.mean_z - em.ez) <= 4.0 * mc.se_z);
    REQUIRE(em.ez2_exact);
    CHECK(std::fabs(mc.mean_z2 - em.ez2) <= 4.0 * mc.se_z2);
  }
}

TEST_CASE("first moment relation to the Green value") {
  // E Z = sum_x V(0,x) <= (max_x mu(x)/mu(0)) * even series; on the trees
  // sampled here both the value and its certified second-moment companion
  // must respect the provable envelopes.
  for (std::uint64_t s = 0; s < 4; ++s) {
    const IntrinsicBall ball = sampled_ball(9, 92, s);
    const ExactMoments em = exact_moments(ball.graph);
    const double mu0 = double(ball.graph.degree(0));
    CHECK(em.ez <= 6.0 / mu0 * em.green_electric * (1.0 + 1e-9));
    CHECK(em.ez >= 1.0);
    CHECK(em.ez2 >= em.ez * (1.0 - 1e-12));
  }
}

TEST_CASE("swapping the two walk streams leaves the collision law unchanged") {
  const IntrinsicBall ball = sampled_ball(8, 93, 0);
  const std::size_t runs = 4000;
  std::vector<double> direct, swapped;
  for (std::size_t k = 0; k < runs; ++k) {
    const RngStream base = RngStream(94, k);
    direct.push_back(
        double(sample_Z_with_streams(ball.graph, base.child(1), base.child(2)).z));
    swapped.push_back(
        double(sample_Z_with_streams(ball.graph, base.child(2), base.child(1)).z));
  }
  const MeanStats a = mean_stats(direct);
  const MeanStats b = mean_stats(swapped);
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  CHECK(std::fabs(a.mean - b.mean) < 4.0 * se);
}

TEST_CASE("theorem-style experiment verdicts on a small radius") {
  Theorem1Options opt;
  opt.r = 8;
  opt.trees = 12;
  opt.mc_runs = 500;
  opt.seed = 95;
  opt.workers = 2;
  Theorem1Summary summary;
  const std::vector<MomentReport> reports = theorem1_experiment(opt, &summary);
  REQUIRE(reports.size() == 12);
  CHECK(summary.upper_first_violations == 0);
  CHECK(summary.upper_second_violations == 0);
  for (const MomentReport& rep : reports) {
    CHECK(rep.ez >= 1.0);
    CHECK(rep.ez <= 6.0 * 9.0);
    CHECK(rep.mc_runs == 500);
    CHECK(rep.ball_size >= 1);
  }
  // Lower-bound failures are monotone: smaller eps can only pass more trees.
  for (std::size_t e = 1; e < summary.eps_grid.size(); ++e) {
    CHECK(summary.lower_failures[e] <= summary.lower_failures[e - 1]);
  }
  // eps r <= 1 at the smallest grid point here, and Z >= 1 always.
  CHECK(summary.lower_failures.back() == 0);
}

TEST_CASE("infinite collision demo basics") {
  WilsonConfig cfg;
  cfg.region_radius = 13;
  cfg.container_factor = 4.0;
  RngStream rng(96, 0);
  const SpanningTree tree = wilson_infinity_approx(cfg, rng);
  const std::vector<std::int64_t> targets = {1, 2, 4};
  const auto rows = infinite_collision_demo(tree, 0.5, targets, 800, RngStream(97, 0));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].p_hat == doctest::Approx(1.0));  // N=1 is the time-zero collision
  CHECK(rows[0].radius == 2);
  for (const auto& row : rows) {
    CHECK(row.threshold == doctest::Approx(0.25 / 12.0));
    CHECK(row.p_hat >= 0.0);
    CHECK(row.p_hat <= 1.0);
  }
}

TEST_CASE("P(Z >= N) is nonincreasing in N on a fixed ball") {
  const IntrinsicBall ball = sampled_ball(8, 98, 0);
  const std::size_t runs = 3000;
  std::map<std::int64_t, int> survival;
  for (std::size_t k = 0; k < runs; ++k) {
    const CollisionSample s = sample_Z(ball.graph, RngStream(99, k));
    for (std::int64_t n = 1; n <= 8; ++n) {
      if (s.z >= n) ++survival[n];
    }
  }
  for (std::int64_t n = 2; n <= 8; ++n) {
    CHECK(survival[n] <= survival[n - 1]);
  }
  CHECK(survival[1] == int(runs));
}

TEST_CASE("ball cap triggers the Monte Carlo fallback error") {
  const IntrinsicBall ball = sampled_ball(6, 100, 0);
  MomentOptions opt;
  opt.member_cap = 2;
  CHECK_THROWS_AS(exact_moments(ball.graph, opt), BallTooLarge);
}
