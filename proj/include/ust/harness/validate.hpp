#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ust/tree_metrics.hpp"

namespace ust {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed = true;
};

// Self-contained oracle suite: loop erasure against the textbook recursion,
// sampler uniformity against matrix-tree counts, electrical identities on
// sampled balls, collision moments on closed-form and brute-force cases, and
// a determinism rerun. `inject_fault` deliberately corrupts one production
// result ("loop_erase") so the negative path of the harness stays honest.
ValidationReport run_validation(std::uint64_t seed, int workers,
                                const std::string& inject_fault = "");

struct PairChainMoments {
  double ez = 0.0;
  double ez2 = 0.0;
};

// Brute-force collision moments from the explicit two-walk product chain,
// independent of the production moment code. Quadratic state space; meant
// for balls of at most a few dozen members.
PairChainMoments pair_chain_moments(const BallGraph& ball, double tol = 1e-13);

}  // namespace ust
