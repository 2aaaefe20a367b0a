#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "erw/error.hpp"
#include "erw/estimators.hpp"
#include "erw/exact.hpp"
#include "erw/stats.hpp"

namespace {

using erw::kCensored;

TEST(Stats, WilsonZeroSuccesses) {
  const auto band = erw::wilson_interval(0, 10, 1.96);
  EXPECT_EQ(band.lower, 0.0);
  EXPECT_NEAR(band.upper, 0.27754, 1e-5);
}

TEST(Stats, BinomialUsesNormalWithEnoughCounts) {
  const auto band = erw::binomial_interval(500, 1000, 2.0);
  EXPECT_NEAR(band.lower, 0.5 - 2.0 * std::sqrt(0.25 / 1000), 1e-15);
  EXPECT_NEAR(band.upper, 0.5 + 2.0 * std::sqrt(0.25 / 1000), 1e-15);
  const auto small = erw::binomial_interval(3, 1000, 2.0);
  const auto wilson = erw::wilson_interval(3, 1000, 2.0);
  EXPECT_EQ(small.lower, wilson.lower);
  EXPECT_EQ(small.upper, wilson.upper);
  EXPECT_GT(small.lower, 0.0);
  EXPECT_EQ(erw::wilson_interval(7, 7, 3.0).upper, 1.0);
  EXPECT_THROW(erw::binomial_interval(0, 0, 2.0), std::invalid_argument);
}

TEST(Stats, KsStatisticHandlesTies) {
  EXPECT_EQ(erw::ks_statistic({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_EQ(erw::ks_statistic({1, 1, 1, 1}, {2, 2, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(erw::ks_statistic({1, 1, 2, 2}, {1, 2, 2, 2}), 0.25);
  EXPECT_THROW(erw::ks_statistic({}, {1.0}), std::invalid_argument);
}

TEST(Stats, KsUniformAndCritical) {
  EXPECT_DOUBLE_EQ(erw::ks_statistic_uniform({0.5}), 0.5);
  EXPECT_NEAR(erw::ks_critical_one_sample(100, 0.05), std::sqrt(-std::log(0.025) / 2.0) / 10.0, 1e-15);
  EXPECT_NEAR(erw::ks_critical_two_sample(100, 100, 0.01), std::sqrt(-std::log(0.005) / 2.0) * std::sqrt(0.02),
              1e-15);
  EXPECT_THROW(erw::ks_critical_one_sample(10, 0.0), std::invalid_argument);
}

TEST(Stats, LeastSquaresExactLine) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{1, -1, -3, -5, -7};
  const auto fit = erw::least_squares(x, y);
  EXPECT_NEAR(fit.slope, -2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-14);
  EXPECT_EQ(fit.points, 5u);
}

TEST(Summary, MomentsAndQuantiles) {
  const std::vector<std::int64_t> times{4, 2, kCensored, 6, 8};
  const auto s = erw::summarize_escape_times(0.5, 2, 100, times, 10);
  EXPECT_EQ(s.replicates, 5);
  EXPECT_EQ(s.censored, 1);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.variance, 20.0 / 3.0);
  EXPECT_EQ(s.quantiles.q50, 6.0);
  EXPECT_EQ(s.quantiles.q90, std::numeric_limits<double>::infinity());
  ASSERT_TRUE(s.escape_times.has_value());
  EXPECT_EQ(*s.escape_times, times);
  EXPECT_FALSE(erw::summarize_escape_times(0.5, 2, 100, times, 4).escape_times.has_value());
}

TEST(EscapeTimes, IdenticalAcrossThreadCounts) {
  const auto one = erw::simulate_escape_times(0.3, 6, 3000, {99, 1}, 0);
  const auto four = erw::simulate_escape_times(0.3, 6, 3000, {99, 4}, 0);
  EXPECT_EQ(one, four);
  const auto shifted = erw::simulate_escape_times(0.3, 6, 10, {99, 1}, 0, 2990);
  EXPECT_TRUE(std::equal(shifted.begin(), shifted.end(), one.end() - 10));
}

TEST(EscapeTimes, MeanMatchesExact) {
  for (const double p : {0.25, 0.7}) {
    const auto s = erw::mc_escape_times(p, 5, 40000, {7, 2});
    const auto exact = erw::exact_expected_escape(5, p);
    EXPECT_NEAR(s.mean, exact.expectation, s.mean_ci_halfwidth * 1.6) << p;
    EXPECT_EQ(s.censored, 0);
  }
}

TEST(EscapeTimes, CensoringBudget) {
  EXPECT_THROW(erw::mc_escape_times(0.5, 30, 100, {}, 10), erw::BudgetExceeded);
  EXPECT_THROW(erw::mc_escape_times(0.5, 1, 100, {}), std::invalid_argument);
}

TEST(SurvivalCurve, MonteCarloBandsCoverExact) {
  const auto times = erw::simulate_escape_times(0.6, 4, 50000, {12, 1}, 0);
  std::vector<std::int64_t> grid;
  for (std::int64_t t = 0; t <= 60; t += 2) grid.push_back(t);
  const auto exact = erw::exact_survival(4, 0.6, 60);
  const auto checks = erw::compare_survival(times, exact, grid, 4.0);
  for (const auto& c : checks) EXPECT_TRUE(c.inside) << "t=" << c.t;

  const auto curve = erw::mc_survival_curve(times, 4, 0.6, 1000, grid);
  ASSERT_TRUE(curve.ci_halfwidth.has_value());
  EXPECT_EQ(curve.source, erw::CurveSource::MonteCarlo);
  EXPECT_EQ(curve.at(0), 1.0);
  EXPECT_THROW(erw::mc_survival_curve(times, 4, 0.6, 10, grid), std::invalid_argument);
}

TEST(SurvivalCurve, CsvAndRestriction) {
  const auto curve = erw::exact_survival(2, 0.3, 4);
  std::ostringstream out;
  erw::write_csv(out, curve.restricted_to({0, 2, 4}));
  EXPECT_EQ(out.str(), "t,survival\n0,1\n2,0.7\n4," + erw::format_double(0.7 * (1.0 - (0.5 - 0.4 / 6.0))) + "\n");
  EXPECT_THROW(curve.at(5), std::out_of_range);
  EXPECT_EQ(erw::format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(erw::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(TailFit, RecoversGeometricDecay) {
  erw::SurvivalCurve curve;
  curve.barrier = 3;
  for (std::int64_t t = 0; t <= 400; ++t) {
    curve.times.push_back(t);
    curve.survival.push_back(0.5 * std::exp(-0.05 * static_cast<double>(t)));
  }
  const auto fit = erw::fit_tail(curve);
  EXPECT_NEAR(fit.slope, -0.05, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(0.5), 1e-9);
  EXPECT_GE(fit.points, 10u);
}

TEST(TailFit, Errors) {
  erw::SurvivalCurve flat;
  for (std::int64_t t = 0; t < 20; ++t) {
    flat.times.push_back(t);
    flat.survival.push_back(1e-3);
  }
  EXPECT_THROW(erw::fit_tail(flat), std::invalid_argument);
  flat.times.resize(5);
  flat.survival.resize(5);
  EXPECT_THROW(erw::fit_tail(flat), std::invalid_argument);
  EXPECT_THROW(erw::fit_tail(flat, 1e-2, 1e-3), std::invalid_argument);
}

TEST(TailFit, SlopeScalesLikeInverseSquare) {
  for (const double p : {0.25, 0.5, 0.7}) {
    const auto five = erw::fit_tail(erw::exact_survival_until(5, p, 1e-7));
    const auto ten = erw::fit_tail(erw::exact_survival_until(10, p, 1e-7));
    EXPECT_NEAR(ten.slope / five.slope, 0.25, 0.25 * 0.15) << p;
    EXPECT_GT(five.r_squared, 0.999);
  }
}

TEST(TailFit, AutoUsesExactCurveForSmallBarrier) {
  const auto fit = erw::fit_tail_auto(0.5, 6, 10, {});
  EXPECT_EQ(fit.source, erw::CurveSource::Exact);
  // Symmetric walk: leading eigenvalue cos(pi/(2N)) per step.
  EXPECT_NEAR(fit.slope, std::log(std::cos(M_PI / 12.0)), 1e-3);
}

TEST(Theta, SymmetricNormalizedMeansNearOne) {
  const auto est = erw::estimate_theta(0.5, {4, 8}, 20000, {3, 2});
  ASSERT_EQ(est.entries.size(), 2u);
  for (const auto& e : est.entries) EXPECT_NEAR(e.normalized_mean, 1.0, e.ci) << e.barrier;
  EXPECT_EQ(est.theta, est.entries.back().normalized_mean);
  EXPECT_THROW(erw::estimate_theta(0.8, {4}, 10, {}), std::invalid_argument);
  EXPECT_THROW(erw::estimate_theta(0.5, {8, 4}, 10, {}), std::invalid_argument);
}

TEST(Bounds, MarkovAndKolmogorov) {
  const auto checks = erw::verify_markov_kolmogorov_bounds(8, {0.5, 3.0}, 20000, {4, 2});
  ASSERT_EQ(checks.size(), 2u);
  EXPECT_EQ(checks[0].kind, erw::BoundKind::Kolmogorov);
  EXPECT_EQ(checks[0].threshold_time, 32);
  EXPECT_EQ(checks[1].kind, erw::BoundKind::Markov);
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.c;
  // Exact reference for the symmetric walk.
  const auto exact = erw::exact_survival(8, 0.5, 192);
  EXPECT_NEAR(checks[0].empirical, exact.at(32), 4.0 * checks[0].sigma);
  EXPECT_NEAR(checks[1].empirical, exact.at(192), 4.0 * checks[1].sigma + 1e-4);
}

TEST(Representations, KsPassesForSmallRun) {
  const auto check = erw::check_representations(0.75, 200, 3000, {6, 2}, 0.001);
  ASSERT_EQ(check.pairs.size(), 3u);
  for (const auto& pair : check.pairs) EXPECT_TRUE(pair.passed) << pair.statistic << " vs " << pair.critical;
}

}  // namespace
