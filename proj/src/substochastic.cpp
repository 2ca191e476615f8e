#include "ust/detail/substochastic.hpp"

#include <cmath>

namespace ust::detail {

// The killed kernel is reversible, so every accumulated series settles into
// a clean geometric tail with per-two-step ratio lambda_1^2 (squared series:
// lambda_1^4). We track the live-mass decay for the ratio, complete each
// series with the projected geometric tail at checkpoints, and stop once the
// tail-corrected totals agree across consecutive checkpoints to a fraction
// of rel_tol. The realized truncation error is validated against the dense
// spectral route in the test suite.
CollisionSeries iterate_collision_series(const BallGraph& g, int source,
                                         double rel_tol, std::int64_t max_steps,
                                         bool need_vsq) {
  const SubstochasticKernel kernel(g);
  const std::size_t n = g.size();
  CollisionSeries out;
  if (need_vsq) out.v_squared_sum.assign(n, 0.0);

  std::vector<double> v(n, 0.0), w(n);
  v[std::size_t(source)] = 1.0;

  constexpr std::int64_t kCheckpoint = 256;  // even, so parity stays aligned
  double norm_prev = 0.0;  // ||v_{n-1}||^2 entering the current step
  double mass_at_prev_checkpoint = 1.0;
  double ratio2_prev = -1.0;
  // Tail-corrected candidate totals at the last three checkpoints, for the
  // second-level Aitken step (the candidates themselves converge
  // geometrically from below).
  struct Candidate {
    double c2 = -1.0, c1 = -1.0, c0 = -1.0;
    void push(double v) {
      c2 = c1;
      c1 = c0;
      c0 = v;
    }
    // Residual estimate and Aitken correction; returns false until the
    // geometric regime is established.
    bool settle(double rel_tol, double& correction) const {
      if (c2 < 0.0) return false;
      const double d1 = c1 - c2;
      const double d0 = c0 - c1;
      if (d0 == 0.0) {
        correction = 0.0;
        return true;
      }
      if (d1 == 0.0 || (d0 > 0.0) != (d1 > 0.0)) return false;
      const double q = d0 / d1;
      if (q >= 0.98) return false;
      correction = q > 0.0 ? d0 * q / (1.0 - q) : 0.0;
      return std::fabs(correction) + std::fabs(d0) < rel_tol * std::fabs(c0);
    }
  };
  Candidate cand_diag, cand_even, cand_g;
  int agreements = 0;

  for (std::int64_t step_index = 0;; ++step_index) {
    double norm2 = 0.0;
    if (need_vsq) {
      double* acc = out.v_squared_sum.data();
      for (std::size_t i = 0; i < n; ++i) {
        const double s = v[i] * v[i];
        norm2 += s;
        acc[i] += s;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) norm2 += v[i] * v[i];
    }
    out.diag_sum += norm2;
    const double v_src = v[std::size_t(source)];
    out.g_series += v_src;
    if (step_index % 2 == 0) out.even_series += v_src;

    if (step_index > 0 && step_index % kCheckpoint == 0) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) mass += v[i];
      if (mass <= 0.0) {
        out.steps = step_index;
        return out;  // walk dead with certainty: series are exact already
      }
      const double window_ratio = mass / mass_at_prev_checkpoint;
      mass_at_prev_checkpoint = mass;
      const double ratio2 = std::pow(window_ratio, 2.0 / double(kCheckpoint));
      if (ratio2 < 1.0) {
        const bool ratio_settled =
            ratio2_prev >= 0.0 &&
            std::fabs(ratio2 - ratio2_prev) <= 0.05 * (1.0 - ratio2);
        ratio2_prev = ratio2;
        const double ratio4 = ratio2 * ratio2;
        const double tail_diag = (norm_prev + norm2) * ratio4 / (1.0 - ratio4);
        const double tail_even = v_src * ratio2 / (1.0 - ratio2);
        cand_diag.push(out.diag_sum + tail_diag);
        cand_even.push(out.even_series + tail_even);
        cand_g.push(out.g_series + tail_even);
        bool accept = false;
        double corr_diag = 0.0, corr_even = 0.0, corr_g = 0.0;
        if (ratio_settled && tail_diag < 0.05 * out.diag_sum) {
          if (cand_diag.settle(rel_tol, corr_diag) &&
              cand_even.settle(rel_tol, corr_even) &&
              cand_g.settle(rel_tol, corr_g)) {
            accept = ++agreements >= 2;
          } else {
            agreements = 0;
          }
        }
        // Fallback: the projected tails themselves are already negligible.
        if (!accept && ratio_settled && 4.0 * tail_diag < rel_tol * out.diag_sum &&
            4.0 * tail_even < rel_tol * out.even_series) {
          accept = true;
          corr_diag = corr_even = corr_g = 0.0;
        }
        if (accept) {
          out.diag_sum = cand_diag.c0 + corr_diag;
          out.even_series = cand_even.c0 + corr_even;
          out.g_series = cand_g.c0 + corr_g;
          if (need_vsq) {
            const double f = ratio4 / (1.0 - ratio4);
            double* acc = out.v_squared_sum.data();
            const double* prev = w.data();  // w still holds v_{n-1}
            for (std::size_t i = 0; i < n; ++i) {
              acc[i] += (prev[i] * prev[i] + v[i] * v[i]) * f;
            }
          }
          out.tail_fraction = out.diag_sum > 0.0 ? tail_diag / out.diag_sum : 0.0;
          out.steps = step_index;
          return out;
        }
      }
    }

    if (step_index >= max_steps) {
      throw TruncationError("collision series: iteration cap exceeded before convergence");
    }
    norm_prev = norm2;
    kernel.step(v, w);
    v.swap(w);
  }
}

}  // namespace ust::detail
