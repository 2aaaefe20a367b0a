#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace erw {

inline constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z);

/// Normal-approximation interval for a binomial proportion, switching to the
/// Wilson score interval when either the success or failure count is below 30.
Interval binomial_interval(std::int64_t successes, std::int64_t trials, double z);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|; ties handled exactly.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// One-sample statistic against the Uniform(0,1) CDF.
double ks_statistic_uniform(std::vector<double> sample);

/// Asymptotic critical values c(alpha) * scale with c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha);
double ks_critical_one_sample(std::size_t n, double alpha);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace erw
