#include <doctest.h>

#include <cmath>
#include <vector>

#include "ust/stats.hpp"

using namespace ust;

TEST_CASE("mean and standard error") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  const MeanStats s = mean_stats(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double xi : x) y.push_back(3.0 - 2.0 * xi);
  const LinearFit f = least_squares(x, y);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.slope_std_error == doctest::Approx(0.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("chi-square survival matches reference values") {
  // Q(x; k) reference points from standard tables.
  CHECK(chi_square_survival(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(chi_square_survival(7.814728, 3) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(chi_square_survival(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(chi_square_survival(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("chi-square statistic") {
  const std::vector<double> obs = {10, 20, 30};
  const std::vector<double> exp = {20, 20, 20};
  CHECK(chi_square_statistic(obs, exp) == doctest::Approx(10.0));
}

TEST_CASE("total variation of empirical counts") {
  const std::vector<double> a = {50, 50};
  const std::vector<double> b = {75, 25};
  CHECK(total_variation(a, b) == doctest::Approx(0.25));
  CHECK(total_variation(a, a) == doctest::Approx(0.0));
}
