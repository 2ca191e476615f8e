#include <doctest.h>

#include <cmath>
#include <set>

#include "support/oracles.hpp"
#include "ust/walk.hpp"

using namespace ust;

TEST_CASE("srw_until stops immediately when the start satisfies the predicate") {
  RngStream rng(1, 0);
  const LatticePath path = srw_until(
      LatticePoint{5, 5, 5}, [](const LatticePoint&) { return true; }, rng);
  REQUIRE(path.vertices.size() == 1);
  CHECK(path.length() == 0);
}

TEST_CASE("srw_until steps are uniform over the six directions") {
  RngStream rng(2, 0);
  std::array<std::int64_t, 6> counts{};
  LatticePoint prev{};
  int taken = 0;
  const int n = 1'000'000;
  // One long unrestricted walk; classify each increment.
  const LatticePath path = srw_until(
      LatticePoint{}, [&](const LatticePoint&) { return taken++ > n; }, rng);
  for (std::size_t i = 1; i < path.vertices.size(); ++i) {
    const LatticePoint d{path.vertices[i].x - path.vertices[i - 1].x,
                         path.vertices[i].y - path.vertices[i - 1].y,
                         path.vertices[i].z - path.vertices[i - 1].z};
    for (int dir = 0; dir < 6; ++dir) {
      if (d.x == kStepDelta[dir][0] && d.y == kStepDelta[dir][1] &&
          d.z == kStepDelta[dir][2]) {
        ++counts[std::size_t(dir)];
      }
    }
    prev = path.vertices[i];
  }
  (void)prev;
  const double total = double(path.length());
  const double sigma = std::sqrt(total * (1.0 / 6.0) * (5.0 / 6.0));
  for (int dir = 0; dir < 6; ++dir) {
    CHECK(std::fabs(double(counts[std::size_t(dir)]) - total / 6.0) < 4.0 * sigma);
  }
}

TEST_CASE("srw_until exit of B(0,1): terminal outside, interior inside") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    RngStream rng(3, s);
    const LatticePath path = srw_until(
        LatticePoint{},
        [](const LatticePoint& p) { return squared_distance(LatticePoint{}, p) > 1; },
        rng);
    REQUIRE(path.vertices.size() >= 3);
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
      CHECK(squared_distance(LatticePoint{}, path.vertices[i]) <= 1);
    }
    CHECK(squared_distance(LatticePoint{}, path.vertices.back()) > 1);
  }
}

TEST_CASE("srw_until honors the step budget") {
  RngStream rng(4, 0);
  CHECK_THROWS_AS(
      srw_until(LatticePoint{}, [](const LatticePoint&) { return false; }, rng, 1000),
      StepBudgetExceeded);
}

TEST_CASE("loop_erase leaves simple paths unchanged") {
  LatticePath path;
  path.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
  CHECK(loop_erase(path).vertices == path.vertices);
}

TEST_CASE("loop_erase on the worked example") {
  LatticePath path;
  path.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
  const LatticePath erased = loop_erase(path);
  const std::vector<LatticePoint> want = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
  CHECK(erased.vertices == want);
}

TEST_CASE("loop_erase matches the textbook recursion on random traces") {
  RngStream rng(5, 0);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t len = rng.uniform_below(201);
    LatticePath path;
    path.vertices.push_back(LatticePoint{});
    for (std::size_t i = 0; i < len; ++i) {
      path.vertices.push_back(step(path.vertices.back(), rng.uniform_dir()));
    }
    const LatticePath mine = loop_erase(path);
    const LatticePath oracle = testing::naive_loop_erase(path);
    REQUIRE(mine.vertices == oracle.vertices);
  }
}

TEST_CASE("loop_erase output properties: simple, endpoints kept, idempotent") {
  RngStream rng(6, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t len = 1 + rng.uniform_below(150);
    LatticePath path;
    path.vertices.push_back(LatticePoint{});
    for (std::size_t i = 0; i < len; ++i) {
      path.vertices.push_back(step(path.vertices.back(), rng.uniform_dir()));
    }
    const LatticePath erased = loop_erase(path);
    CHECK(erased.vertices.front() == path.vertices.front());
    CHECK(erased.vertices.back() == path.vertices.back());
    CHECK(erased.is_adjacency_valid());
    std::set<LatticePoint> unique(erased.vertices.begin(), erased.vertices.end());
    CHECK(unique.size() == erased.vertices.size());
    CHECK(loop_erase(erased).vertices == erased.vertices);
    // Every output vertex occurs in the input.
    std::set<LatticePoint> input(path.vertices.begin(), path.vertices.end());
    for (const auto& v : erased.vertices) CHECK(input.contains(v));
  }
}

TEST_CASE("lerw length at radius 1 is exactly two steps") {
  // From the origin every neighbor is still inside B(0,1), no two unit
  // vectors are adjacent, so the erased exit path is always 0 -> u -> out.
  for (std::uint64_t s = 0; s < 200; ++s) {
    RngStream rng(7, s);
    const LerwSample sample = lerw_length_sample(1, rng);
    CHECK(sample.length == 2);
    CHECK(sample.walk_steps >= 2);
  }
}

TEST_CASE("lerw sample invariants and reproducibility") {
  RngStream a(8, 1), b(8, 1);
  const LerwSample s1 = lerw_length_sample(20, a);
  const LerwSample s2 = lerw_length_sample(20, b);
  CHECK(s1.length == s2.length);
  CHECK(s1.walk_steps == s2.walk_steps);
  CHECK(s1.length >= 1);
  CHECK(std::uint64_t(s1.length) <= s1.walk_steps);
}

TEST_CASE("lerw mean length grows faster than linearly") {
  const RngStream base(9, 0);
  const int samples = 400;
  double mean16 = 0.0, mean32 = 0.0;
  for (int k = 0; k < samples; ++k) {
    RngStream r16 = base.child2(16, std::uint64_t(k));
    RngStream r32 = base.child2(32, std::uint64_t(k));
    mean16 += double(lerw_length_sample(16, r16).length);
    mean32 += double(lerw_length_sample(32, r32).length);
  }
  mean16 /= samples;
  mean32 /= samples;
  CHECK(mean32 / mean16 > 2.0);
}

TEST_CASE("estimate_beta on synthetic exact power laws") {
  // Bypass the sampler: fit log-mean directly through the public interface
  // by feeding radii whose samples are deterministic is not possible, so
  // check the regression math on hand-built stats instead.
  const std::vector<double> logs_n = {std::log(16.0), std::log(32.0), std::log(64.0)};
  std::vector<double> linear, power;
  for (double ln : logs_n) {
    linear.push_back(ln);              // M_n = n
    power.push_back((5.0 / 3.0) * ln); // M_n = n^(5/3)
  }
  const LinearFit f1 = least_squares(logs_n, linear);
  CHECK(f1.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f1.slope_std_error == doctest::Approx(0.0));
  const LinearFit f2 = least_squares(logs_n, power);
  CHECK(f2.slope == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("estimate_beta rejects bad configurations") {
  const RngStream rng(10, 0);
  CHECK_THROWS_AS(estimate_beta({16}, 200, rng), InvalidConfig);
  CHECK_THROWS_AS(estimate_beta({16, 24, 32}, 200, rng), InvalidConfig);
  CHECK_THROWS_AS(estimate_beta({16, 32, 64}, 50, rng), InvalidConfig);
}

TEST_CASE("estimate_beta on real walks lands near the known exponent") {
  const RngStream rng(11, 0);
  const BetaEstimate est = estimate_beta({8, 16, 32, 64}, 150, rng);
  CHECK(est.slope > 1.2);
  CHECK(est.slope < 2.0);
  CHECK(est.per_radius.size() == 4);
  for (const RadiusStat& rs : est.per_radius) {
    CHECK(rs.ci_low < rs.mean_length);
    CHECK(rs.ci_high > rs.mean_length);
  }
}

TEST_CASE("estimate_beta is worker-count independent") {
  const RngStream rng(12, 0);
  const BetaEstimate a = estimate_beta({8, 16, 32}, 120, rng, 1);
  const BetaEstimate b = estimate_beta({8, 16, 32}, 120, rng, 3);
  CHECK(a.slope == b.slope);
  for (std::size_t i = 0; i < a.per_radius.size(); ++i) {
    CHECK(a.per_radius[i].mean_length == b.per_radius[i].mean_length);
  }
}

TEST_CASE("upper tail decays roughly exponentially") {
  const RngStream base(13, 0);
  std::vector<double> lengths;
  for (int k = 0; k < 1000; ++k) {
    RngStream r = base.child(std::uint64_t(k));
    lengths.push_back(double(lerw_length_sample(24, r).length));
  }
  const std::vector<double> kappa = {1.0, 1.5, 2.0, 2.5};
  const TailFit fit = fit_upper_tail(lengths, kappa);
  CHECK(fit.rate > 0.0);
  // Survival points should sit below the fitted exponential envelope shape.
  for (std::size_t i = 0; i < fit.kappa.size(); ++i) {
    if (fit.survival[i] > 0.0) {
      CHECK(fit.survival[i] <= 2.0 * std::exp(-0.5 * fit.rate * fit.kappa[i]));
    }
  }
}
