#include "ust/stats.hpp"

#include <algorithm>
#include <limits>

namespace ust {

MeanStats mean_stats(std::span<const double> values) {
  MeanStats s;
  s.count = values.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / double(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - s.mean;
      ss += d * d;
    }
    s.variance = ss / double(s.count - 1);
    s.std_error = std::sqrt(s.variance / double(s.count));
  }
  return s;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  LinearFit f;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  if (n > 2) {
    const double s2 = ss_res / double(n - 2);
    f.slope_std_error = std::sqrt(s2 / sxx);
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

namespace {

// Regularized lower incomplete gamma P(a,x) by series expansion (x < a+1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_survival(double statistic, int dof) {
  if (statistic <= 0.0) return 1.0;
  const double a = 0.5 * double(dof);
  const double x = 0.5 * statistic;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_statistic(std::span<const double> observed,
                            std::span<const double> expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

double total_variation(std::span<const double> counts_a,
                       std::span<const double> counts_b) {
  double na = 0.0, nb = 0.0;
  for (double v : counts_a) na += v;
  for (double v : counts_b) nb += v;
  if (na == 0.0 || nb == 0.0) return na == nb ? 0.0 : 1.0;
  double tv = 0.0;
  for (std::size_t i = 0; i < counts_a.size(); ++i) {
    tv += std::fabs(counts_a[i] / na - counts_b[i] / nb);
  }
  return 0.5 * tv;
}

}  // namespace ust
