#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ust {

struct MeanStats {
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n-1 denominator)
  double std_error = 0.0;
  std::size_t count = 0;
};

MeanStats mean_stats(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double r_squared = 1.0;
};

// Ordinary least squares y = a + b x with the usual slope standard error.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// Upper tail probability of the chi-square distribution with k degrees of
// freedom, via the regularized incomplete gamma function Q(k/2, x/2).
double chi_square_survival(double statistic, int dof);

// Pearson statistic against given expected counts; expected[i] > 0.
double chi_square_statistic(std::span<const double> observed,
                            std::span<const double> expected);

// Total variation distance between two empirical distributions given as
// aligned count vectors (normalized internally).
double total_variation(std::span<const double> counts_a,
                       std::span<const double> counts_b);

}  // namespace ust
