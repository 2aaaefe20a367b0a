#include "erw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace erw {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  const auto n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  // Pin the endpoints that are exact in closed form; rounding can leave them a ulp short.
  const double lower = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lower, upper};
}

Interval binomial_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  if (successes < 30 || trials - successes < 30) return wilson_interval(successes, trials, z);
  const auto n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n);
  return {phat - half, phat + half};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_statistic_uniform(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("KS needs a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double best = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = std::clamp(sample[i], 0.0, 1.0);
    best = std::max({best, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return best;
}

namespace {
double ks_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}
}  // namespace

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return ks_coefficient(alpha) * std::sqrt((nd + md) / (nd * md));
}

double ks_critical_one_sample(std::size_t n, double alpha) {
  return ks_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.points = x.size();
  return fit;
}

}  // namespace erw
