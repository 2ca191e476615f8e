#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ust/lattice.hpp"
#include "ust/rng.hpp"
#include "ust/stats.hpp"

namespace ust {

struct StepBudgetExceeded : std::runtime_error {
  explicit StepBudgetExceeded(std::uint64_t budget)
      : std::runtime_error("random walk exceeded its step budget"), budget(budget) {}
  std::uint64_t budget;
};

struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000'000ULL;

// Simple random walk from `start`, stopped at the first vertex where `stop`
// is true (the start itself counts). Returns the full trace including the
// stopping vertex. Throws StepBudgetExceeded if the cap is hit first.
LatticePath srw_until(const LatticePoint& start,
                      const std::function<bool(const LatticePoint&)>& stop,
                      RngStream& rng, std::uint64_t step_budget = kDefaultStepBudget);

// Chronological loop erasure: every revisit of a vertex discards the cycle
// made since its previous visit. The result is the simple path from the
// first to the last vertex of the input.
LatticePath loop_erase(const LatticePath& path);

struct LerwSample {
  std::int64_t n = 0;           // ball radius
  std::int64_t length = 0;      // loop-erased path length M_n
  std::uint64_t walk_steps = 0; // raw SRW steps consumed
};

// Walk from the origin to the first exit of the Euclidean ball B(0,n),
// loop-erase, report the erased length M_n.
LerwSample lerw_length_sample(std::int64_t n, RngStream& rng,
                              std::uint64_t step_budget = kDefaultStepBudget);

struct RadiusStat {
  std::int64_t n = 0;
  double mean_length = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // 95% interval for the mean
  double ci_high = 0.0;
  std::size_t samples = 0;
};

struct BetaEstimate {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<RadiusStat> per_radius;
};

// Least-squares slope of log(mean M_n) against log n. Requires at least
// three distinct radii spanning a factor >= 4 and >= 100 samples per radius.
// Sample (radius i, index k) draws from rng.child2(i, k), so results do not
// depend on scheduling.
BetaEstimate estimate_beta(const std::vector<std::int64_t>& radii,
                           std::size_t samples_per_radius, const RngStream& rng,
                           int workers = 1);

struct TailFit {
  double rate = 0.0;       // fitted c in P(M >= k*mean) ~ exp(-c*k)
  double r_squared = 0.0;
  std::vector<double> kappa;
  std::vector<double> survival;
};

// Empirical upper-tail decay of a sample against multiples of its mean.
TailFit fit_upper_tail(std::span<const double> values,
                       std::span<const double> kappa_grid);

}  // namespace ust
