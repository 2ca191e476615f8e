#include "ust/walk.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ust/harness/parallel.hpp"

namespace ust {

LatticePath srw_until(const LatticePoint& start,
                      const std::function<bool(const LatticePoint&)>& stop,
                      RngStream& rng, std::uint64_t step_budget) {
  LatticePath path;
  path.vertices.push_back(start);
  LatticePoint cur = start;
  std::uint64_t steps = 0;
  while (!stop(cur)) {
    if (steps++ >= step_budget) throw StepBudgetExceeded(step_budget);
    cur = step(cur, rng.uniform_dir());
    path.vertices.push_back(cur);
  }
  return path;
}

LatticePath loop_erase(const LatticePath& path) {
  LatticePath out;
  if (path.vertices.empty()) return out;
  out.vertices.reserve(64);
  std::unordered_map<PointKey, std::size_t> position;
  position.reserve(path.vertices.size() * 2);
  for (const LatticePoint& v : path.vertices) {
    const PointKey key = pack_point(v);
    auto it = position.find(key);
    if (it != position.end()) {
      // Revisit: drop the cycle walked since the previous visit.
      for (std::size_t i = it->second + 1; i < out.vertices.size(); ++i) {
        position.erase(pack_point(out.vertices[i]));
      }
      out.vertices.resize(it->second + 1);
    } else {
      position.emplace(key, out.vertices.size());
      out.vertices.push_back(v);
    }
  }
  return out;
}

LerwSample lerw_length_sample(std::int64_t n, RngStream& rng,
                              std::uint64_t step_budget) {
  if (n < 1) throw InvalidConfig("lerw_length_sample: radius must be >= 1");
  const std::int64_t r2 = n * n;
  const LatticePoint origin{};
  LatticePath trace = srw_until(
      origin,
      [&](const LatticePoint& p) { return squared_distance(origin, p) > r2; }, rng,
      step_budget);
  LatticePath erased = loop_erase(trace);
  LerwSample s;
  s.n = n;
  s.length = std::int64_t(erased.length());
  s.walk_steps = trace.length();
  return s;
}

BetaEstimate estimate_beta(const std::vector<std::int64_t>& radii,
                           std::size_t samples_per_radius, const RngStream& rng,
                           int workers) {
  std::vector<std::int64_t> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 3) {
    throw InvalidConfig("estimate_beta: need at least 3 distinct radii");
  }
  if (sorted.front() < 1) throw InvalidConfig("estimate_beta: radii must be >= 1");
  if (sorted.back() < 4 * sorted.front()) {
    throw InvalidConfig("estimate_beta: radii must span at least two octaves");
  }
  if (samples_per_radius < 100) {
    throw InvalidConfig("estimate_beta: need >= 100 samples per radius");
  }

  BetaEstimate est;
  est.per_radius.resize(sorted.size());
  const std::size_t total = sorted.size() * samples_per_radius;
  std::vector<double> lengths(total, 0.0);
  parallel_for(total, workers, [&](std::size_t task) {
    const std::size_t i = task / samples_per_radius;
    const std::size_t k = task % samples_per_radius;
    RngStream stream = rng.child2(i, k);
    lengths[task] = double(lerw_length_sample(sorted[i], stream).length);
  });

  std::vector<double> log_n(sorted.size()), log_mean(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    std::span<const double> block(lengths.data() + i * samples_per_radius,
                                  samples_per_radius);
    const MeanStats ms = mean_stats(block);
    RadiusStat& rs = est.per_radius[i];
    rs.n = sorted[i];
    rs.mean_length = ms.mean;
    rs.std_error = ms.std_error;
    rs.ci_low = ms.mean - 1.96 * ms.std_error;
    rs.ci_high = ms.mean + 1.96 * ms.std_error;
    rs.samples = samples_per_radius;
    log_n[i] = std::log(double(sorted[i]));
    log_mean[i] = std::log(ms.mean);
  }
  const LinearFit fit = least_squares(log_n, log_mean);
  est.slope = fit.slope;
  est.std_error = fit.slope_std_error;
  est.intercept = fit.intercept;
  est.r_squared = fit.r_squared;
  return est;
}

TailFit fit_upper_tail(std::span<const double> values,
                       std::span<const double> kappa_grid) {
  TailFit out;
  const MeanStats ms = mean_stats(values);
  if (ms.count == 0 || ms.mean <= 0.0) return out;
  std::vector<double> xs, ys;
  for (double kappa : kappa_grid) {
    const double threshold = kappa * ms.mean;
    std::size_t hits = 0;
    for (double v : values) {
      if (v >= threshold) ++hits;
    }
    const double p = double(hits) / double(ms.count);
    out.kappa.push_back(kappa);
    out.survival.push_back(p);
    if (p > 0.0) {
      xs.push_back(kappa);
      ys.push_back(std::log(p));
    }
  }
  if (xs.size() >= 2) {
    const LinearFit fit = least_squares(xs, ys);
    out.rate = -fit.slope;
    out.r_squared = fit.r_squared;
  }
  return out;
}

}  // namespace ust
