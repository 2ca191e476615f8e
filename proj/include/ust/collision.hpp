#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ust/rng.hpp"
#include "ust/tree_metrics.hpp"
#include "ust/wilson.hpp"

namespace ust {

inline constexpr std::int32_t kCemetery = -1;

struct KilledWalkState {
  std::int32_t position = 0;  // member index, or kCemetery once killed
  std::int64_t step_count = 0;

  bool alive() const { return position != kCemetery; }
};

// One step of the walk killed on the absorbing layer: uniform over the
// degree(x) tree edges at the current vertex; an absorbing edge sends the
// walk to the cemetery, which is itself absorbing.
void step_killed_walk(KilledWalkState& state, const BallGraph& ball, RngStream& rng);

struct CollisionSample {
  std::int64_t z = 0;           // number of times both walks sit on one vertex
  std::int64_t lifetime_x = 0;  // first time the walk is dead
  std::int64_t lifetime_y = 0;
};

// Two independent killed walks from the source vertex, advanced in lockstep;
// collisions are counted at live vertices only. `rng` must be a stream
// dedicated to this run; the walks draw from rng.child(1) and rng.child(2).
CollisionSample sample_Z(const BallGraph& ball, const RngStream& rng);
CollisionSample sample_Z_with_streams(const BallGraph& ball, RngStream walk_x,
                                      RngStream walk_y);

struct BallTooLarge : std::runtime_error {
  explicit BallTooLarge(std::size_t size, std::size_t cap)
      : std::runtime_error("ball exceeds the exact-moment cap (" + std::to_string(size) +
                           " > " + std::to_string(cap) + "); use Monte Carlo sampling"),
        size(size),
        cap(cap) {}
  std::size_t size;
  std::size_t cap;
};

struct MomentOptions {
  double rel_tol = 1e-9;           // series truncation tolerance
  std::size_t spectral_cap = 1200; // dense eigensolve up to this many members
  std::int64_t max_iterations = 60'000'000;
  std::size_t member_cap = 200'000;
  enum class Route { Auto, Spectral, Iterative };
  Route route = Route::Auto;
};

struct ExactMoments {
  double ez = 0.0;    // E Z for two walks from the source
  double ez2 = 0.0;   // E Z^2, exact on the spectral route; otherwise a
                      // certified upper bound via A(x) <= 6 R(x <-> exits)
  bool ez2_exact = false;
  double even_series = 0.0;     // sum_n p_{2n}(0,0)
  double g_series = 0.0;        // sum_n p_n(0,0)
  double green_electric = 0.0;  // mu(0) R(0 <-> exits)
  double max_green_diag = 0.0;  // max_x mu(x) R(x <-> exits)
  std::string route;
  std::int64_t iterations = 0;
};

// First and second collision moments of the killed pair, plus the return
// series and the electrical Green values they are checked against.
ExactMoments exact_moments(const BallGraph& ball, const MomentOptions& opt = {});

struct McCollisionStats {
  std::size_t runs = 0;
  double mean_z = 0.0, se_z = 0.0;
  double mean_z2 = 0.0, se_z2 = 0.0;
  std::vector<std::int64_t> z_values;  // kept when requested
};

// Monte Carlo collision runs; run k draws from base.child2(kMcRunTag, k).
inline constexpr std::uint64_t kMcRunTag = 0x4D43;  // "MC"
McCollisionStats mc_collision(const BallGraph& ball, std::size_t runs,
                              const RngStream& base, bool keep_values = false);

struct MomentReport {
  std::uint64_t tree_index = 0;
  std::int64_t r = 0;
  std::size_t ball_size = 0;
  std::size_t ur_size = 0;
  std::int64_t ur_intrinsic_radius = 0;
  int mu_origin = 0;
  double ez = 0.0, ez2 = 0.0;
  bool ez2_exact = false;
  double even_series = 0.0, g_series = 0.0, green_electric = 0.0;
  double max_green_diag = 0.0;
  double r_eff_origin = 0.0, r_eff_ur = 0.0;
  double mc_ez = 0.0, mc_ez_se = 0.0, mc_ez2 = 0.0, mc_ez2_se = 0.0;
  std::size_t mc_runs = 0;
  bool upper_first_ok = false;   // E Z <= 6 (r+1)
  bool upper_second_ok = false;  // E Z^2 <= 144 (r+1)^2 + 6 (r+1)
  std::vector<std::uint8_t> lower_ok;  // per eps: E Z >= eps r
  std::vector<double> window_prob;     // per eps: MC P(eps r <= Z <= 72 eps^-2 r)
  std::vector<double> window_se;
};

struct Theorem1Options {
  std::int64_t r = 50;
  std::size_t trees = 200;
  std::size_t mc_runs = 4000;
  std::vector<double> eps_grid = {0.5, 0.2, 0.1, 0.05, 0.02};
  double container_factor = 4.0;
  std::uint64_t seed = 1;
  int workers = 1;
  MomentOptions moments;
};

struct Theorem1Summary {
  std::vector<double> eps_grid;
  std::size_t trees = 0;
  std::size_t upper_first_violations = 0;
  std::size_t upper_second_violations = 0;
  std::vector<std::size_t> lower_failures;      // per eps: trees with E Z < eps r
  std::vector<double> lower_failure_fraction;   // per eps
  std::vector<std::size_t> window_trees;        // passing trees contributing
  std::vector<double> window_prob;              // pooled estimate over passing trees
  std::vector<double> window_se;
  std::vector<double> window_threshold;         // eps^2 / 12
  std::vector<double> window_min_prob;          // worst per-tree estimate
  std::vector<double> window_min_prob_se;
};

// Per-tree collision moments, resistance profile and bound verdicts over
// freshly sampled trees. Tree i derives every stream from (seed, i), so the
// report sequence is reproducible for any worker count.
std::vector<MomentReport> theorem1_experiment(const Theorem1Options& opt,
                                              Theorem1Summary* summary = nullptr);

struct CollisionDemoRow {
  std::int64_t n_target = 0;  // N
  std::int64_t radius = 0;    // ceil(N / eps)
  std::size_t runs = 0;
  double p_hat = 0.0;  // MC estimate of P(Z_{B_radius} >= N)
  double se = 0.0;
  double threshold = 0.0;  // eps^2 / 12
};

// Lower-bound certificates P(Z_{B_{N/eps}} >= N) for growing N on one tree:
// the quantitative route to collisions beyond any fixed count.
std::vector<CollisionDemoRow> infinite_collision_demo(
    const SpanningTree& tree, double eps, const std::vector<std::int64_t>& n_values,
    std::size_t runs, const RngStream& rng);

}  // namespace ust
