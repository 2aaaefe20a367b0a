#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "erw/couplings.hpp"
#include "erw/exact.hpp"

namespace {

using erw::Purpose;
using erw::UniformStream;

UniformStream stream_for(std::uint64_t replicate, std::uint64_t seed = 5) {
  return UniformStream({seed, replicate, Purpose::WalkDriver});
}

TEST(Modes, NamesRoundTrip) {
  using erw::CouplingMode;
  for (const auto m : {CouplingMode::Dominance, CouplingMode::Shifted, CouplingMode::Asymmetric}) {
    EXPECT_EQ(erw::parse_coupling_mode(erw::to_string(m)), m);
  }
  EXPECT_FALSE(erw::parse_coupling_mode("none").has_value());
}

TEST(Dominance, ErwMarginalMatchesStandaloneSimulation) {
  auto a = stream_for(4);
  auto b = stream_for(4);
  const auto trace = erw::run_dominance_coupling(0.3, 1000, a);
  const auto alone = erw::simulate_abs_erw(erw::WalkParams(0.3), 1000, b);
  EXPECT_EQ(trace.erw.positions, alone.positions);
  EXPECT_EQ(trace.uniforms_consumed, 1000u);
}

TEST(Dominance, OrderHoldsPathwise) {
  for (const double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    for (std::uint64_t r = 0; r < 50; ++r) {
      auto s = stream_for(r);
      const auto trace = erw::run_dominance_coupling(p, 3000, s);
      ASSERT_FALSE(erw::first_order_violation(trace, p).has_value()) << p << " " << r;
    }
  }
}

TEST(Dominance, SymmetricCaseHasNoDistanceEvents) {
  auto s = stream_for(0);
  const auto trace = erw::run_dominance_coupling(0.5, 2000, s);
  EXPECT_TRUE(trace.distance_events.empty());
  EXPECT_EQ(trace.erw.positions, trace.companion);
}

TEST(Dominance, DistanceBoundHoldsPathwise) {
  for (const double p : {0.55, 0.7, 0.9}) {
    for (std::uint64_t r = 0; r < 50; ++r) {
      auto s = stream_for(r);
      const auto trace = erw::run_dominance_coupling(p, 3000, s);
      ASSERT_FALSE(erw::first_distance_violation(trace).has_value()) << p << " " << r;
    }
  }
}

TEST(Distance, ProcessCountsEvents) {
  erw::CoupledTrace trace;
  trace.companion.assign(6, 0);
  trace.distance_events = {2, 5};
  const auto d = erw::distance_process(trace);
  EXPECT_EQ(d.values, (std::vector<std::int64_t>{0, 0, 2, 2, 2, 4}));
}

TEST(Distance, ViolationDetected) {
  erw::CoupledTrace trace;
  trace.erw.positions = {0, 1, 2, 3};
  trace.companion = {0, 1, 0, 1};
  EXPECT_EQ(erw::first_distance_violation(trace), 2);
  EXPECT_EQ(erw::first_order_violation(trace, 0.3), 2);
  EXPECT_FALSE(erw::first_order_violation(trace, 0.7).has_value());
}

TEST(Shifted, StructureAndInequality) {
  constexpr std::int64_t n = 6, d = 3;
  for (std::uint64_t r = 0; r < 100; ++r) {
    auto s = stream_for(r);
    const auto c = erw::run_shifted_coupling(0.2, n, d, 12 * n * n, s);
    ASSERT_EQ(c.trace.shift_offset, d * n * n);
    ASSERT_EQ(c.trace.companion[0], c.trace.erw.positions[static_cast<std::size_t>(d * n * n)]);
    ASSERT_TRUE(c.binomial_counter.has_value());
    ASSERT_LE(*c.binomial_counter, 12 * n * n);
    ASSERT_EQ(c.trace.uniforms_consumed, static_cast<std::uint64_t>(d * n * n + 12 * n * n));
    ASSERT_FALSE(erw::first_shifted_violation(c).has_value());
    ASSERT_FALSE(erw::first_order_violation(c.trace, 0.2).has_value());
  }
}

TEST(Shifted, CounterOnlyWithFullWindow) {
  auto s = stream_for(0);
  EXPECT_FALSE(erw::run_shifted_coupling(0.2, 5, 2, 10, s).binomial_counter.has_value());
}

TEST(Shifted, RejectsBadArguments) {
  auto s = stream_for(0);
  EXPECT_THROW(erw::run_shifted_coupling(0.5, 5, 2, 10, s), std::invalid_argument);
  EXPECT_THROW(erw::run_shifted_coupling(0.2, 5, 0, 10, s), std::invalid_argument);
}

TEST(Shifted, AuditCounterMean) {
  const auto audit = erw::audit_shifted(0.25, 10, 13, 4000, {21, 1});
  EXPECT_EQ(audit.audit.violations, 0);
  EXPECT_NEAR(audit.counter_expected, 12.0 * 0.5 * 10 / 13, 1e-12);
  EXPECT_NEAR(audit.counter_mean, audit.counter_expected, 4.0 * audit.counter_sigma);
}

TEST(Asym, CompanionProbabilityAndDomination) {
  EXPECT_NEAR(erw::asym_companion_up_probability(0.6, 1, 10, 2.0), 0.5 + 2 * 0.2 / 20.0, 1e-15);
  for (const double p : {0.55, 0.65, 0.74}) {
    for (const double c : {0.5, 1.0, 4.0}) {
      EXPECT_TRUE(erw::asym_threshold_dominates(p, 1, 20, c)) << p << " " << c;
    }
  }
}

TEST(Asym, CouplingInvariants) {
  constexpr std::int64_t n = 10;
  int activated = 0;
  for (std::uint64_t r = 0; r < 300; ++r) {
    auto s = stream_for(r);
    const auto c = erw::run_asym_coupling(0.6, 1, n, 1.0, s);
    if (!c.activated) continue;
    ++activated;
    ASSERT_GE(c.activation_time, n * n);
    ASSERT_EQ(c.trace.erw.positions[static_cast<std::size_t>(c.activation_time)], n);
    ASSERT_FALSE(erw::first_asym_violation(c).has_value());
    const auto end = c.trace.erw.positions.back();
    ASSERT_TRUE(end == 0 || end == 2 * n);
    ASSERT_EQ(c.erw_returned_to_zero, end == 0);
    ASSERT_TRUE(c.trace.companion.back() == 0 || c.trace.companion.back() >= 2 * n);
    // The companion sits above the elephant, so an upward exit rules out ruin.
    if (!c.erw_returned_to_zero) ASSERT_FALSE(c.companion_ruined);
  }
  EXPECT_GT(activated, 250);
}

TEST(Asym, InactiveWhenCapTooShort) {
  auto s = stream_for(0);
  const auto c = erw::run_asym_coupling(0.6, 1, 10, 1.0, s, 100);
  EXPECT_FALSE(c.activated);
  EXPECT_FALSE(erw::first_asym_violation(c).has_value());
}

TEST(Asym, RejectsBadArguments) {
  auto s = stream_for(0);
  EXPECT_THROW(erw::run_asym_coupling(0.5, 1, 10, 1.0, s), std::invalid_argument);
  EXPECT_THROW(erw::run_asym_coupling(0.8, 1, 10, 1.0, s), std::invalid_argument);
  EXPECT_THROW(erw::run_asym_coupling(0.7, 5, 2, 0.1, s), std::invalid_argument);
}

TEST(Asym, RuinMonteCarloMatchesFormula) {
  const auto est = erw::mc_asym_ruin(1, 10, 0.55, 20000, {3, 2});
  EXPECT_NEAR(est.formula, 0.118500531340128767, 1e-15);
  EXPECT_NEAR(est.fraction, est.formula, 4.0 * est.sigma);
}

TEST(Audits, IdenticalAcrossThreadCounts) {
  const auto one = erw::measure_distance_moment(0.6, 2000, 300, {8, 1});
  const auto four = erw::measure_distance_moment(0.6, 2000, 300, {8, 4});
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.sigma, four.sigma);
  const auto a1 = erw::audit_asym(0.6, 1, 10, 1.0, 200, {8, 1});
  const auto a4 = erw::audit_asym(0.6, 1, 10, 1.0, 200, {8, 4});
  EXPECT_EQ(a1.companion_ruin_fraction, a4.companion_ruin_fraction);
  EXPECT_EQ(a1.activated, a4.activated);
}

TEST(Audits, DominanceCleanAndDistanceBelowBound) {
  const auto audit = erw::audit_dominance(0.75, 2000, 200, {2, 2});
  EXPECT_EQ(audit.violations, 0);
  EXPECT_FALSE(audit.first_violation.has_value());
  const auto m = erw::measure_distance_moment(0.6, 4000, 2000, {2, 2});
  EXPECT_EQ(m.distance_violations, 0);
  EXPECT_LE(m.mean, m.bound + 3.0 * m.sigma);
  EXPECT_THROW(erw::measure_distance_moment(0.75, 10, 10, {}), std::invalid_argument);
}

}  // namespace
