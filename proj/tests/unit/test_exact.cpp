#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "erw/error.hpp"
#include "erw/exact.hpp"
#include "oracles.hpp"

namespace {

TEST(ExactSurvival, StartsAtOneAndIsMonotone) {
  const auto curve = erw::exact_survival(6, 0.35, 400);
  ASSERT_EQ(curve.size(), 401u);
  EXPECT_EQ(curve.at(0), 1.0);
  EXPECT_EQ(curve.at(1), 1.0);
  for (std::size_t i = 1; i < curve.size(); ++i) ASSERT_LE(curve.survival[i], curve.survival[i - 1] + 1e-15);
  // The first N - 1 steps cannot reach the barrier.
  EXPECT_NEAR(curve.at(5), 1.0, 1e-15);
  EXPECT_LT(curve.at(6), 1.0);
}

TEST(ExactSurvival, BarrierOneEscapesAtOnce) {
  const auto curve = erw::exact_survival(1, 0.5, 3);
  EXPECT_EQ(curve.at(0), 1.0);
  EXPECT_EQ(curve.at(1), 0.0);
  EXPECT_EQ(curve.at(3), 0.0);
}

TEST(ExactSurvival, DegenerateBarrierTwo) {
  for (const double p : {0.1, 0.5, 0.9}) {
    EXPECT_EQ(erw::exact_survival(2, p, 2).at(2), 1.0 - p) << p;
  }
}

TEST(ExactSurvival, BarrierTwoProductFormula) {
  for (const double p : {0.05, 0.3, 0.5, 0.6, 0.95}) {
    const auto curve = erw::exact_survival(2, p, 60);
    for (std::int64_t t = 0; t <= 60; ++t) {
      EXPECT_NEAR(curve.at(t), erw::oracle::erw_tau2_survival_product(p, t), 1e-14) << p << " " << t;
    }
  }
  EXPECT_NEAR(erw::exact_survival(2, 0.3, 6).at(6), 0.2142, 1e-12);
}

TEST(ExactSurvival, MatchesPathEnumeration) {
  for (const std::int64_t n : {3, 4, 5}) {
    for (const double p : {0.15, 0.6, 0.9}) {
      const auto curve = erw::exact_survival(n, p, 18);
      const auto oracle = erw::oracle::erw_survival_enumeration(n, p, 18);
      for (std::int64_t t = 0; t <= 18; ++t) {
        EXPECT_NEAR(curve.at(t), oracle[static_cast<std::size_t>(t)], 1e-13) << n << " " << p << " " << t;
      }
    }
  }
}

TEST(ExactSurvival, SymmetricCaseMatchesSimpleWalk) {
  for (const std::int64_t n : {2, 5, 9}) {
    const auto curve = erw::exact_survival(n, 0.5, 300);
    const auto dp = erw::oracle::srw_survival_signed_dp(n, 300);
    for (std::int64_t t = 0; t <= 300; ++t) {
      ASSERT_NEAR(curve.at(t), dp[static_cast<std::size_t>(t)], 1e-13);
      ASSERT_NEAR(curve.at(t), erw::oracle::srw_survival_reflection(n, t), 1e-11);
    }
  }
}

TEST(ExactSurvival, IncreasingInBarrier) {
  for (const double p : {0.25, 0.7}) {
    const auto small = erw::exact_survival(4, p, 200);
    const auto large = erw::exact_survival(5, p, 200);
    for (std::int64_t t = 0; t <= 200; ++t) ASSERT_LE(small.at(t), large.at(t) + 1e-15);
  }
}

TEST(ExactSurvival, OrderedAgainstSimpleWalk) {
  for (std::int64_t n = 2; n <= 8; ++n) {
    const auto srw = erw::oracle::srw_survival_signed_dp(n, 40 * n * n);
    for (const double p : {0.1, 0.3, 0.49, 0.51, 0.7, 0.9}) {
      const auto curve = erw::exact_survival(n, p, 40 * n * n);
      for (std::int64_t t = 0; t <= 40 * n * n; ++t) {
        const double e = curve.at(t);
        const double s = srw[static_cast<std::size_t>(t)];
        if (p >= 0.5) {
          ASSERT_LE(e, s + 1e-14) << n << " " << p << " " << t;
        } else {
          ASSERT_GE(e, s - 1e-14) << n << " " << p << " " << t;
        }
      }
    }
  }
}

TEST(ExactSurvival, RejectsBadArguments) {
  EXPECT_THROW(erw::exact_survival(0, 0.5, 10), std::invalid_argument);
  EXPECT_THROW(erw::exact_survival(3, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(erw::exact_survival(3, 0.5, 0), std::invalid_argument);
}

TEST(DPState, ConservesMassAndParity) {
  auto state = erw::AbsorbingDPState::initial(7, 0.65);
  for (int step = 0; step < 500; ++step) {
    ASSERT_NEAR(state.survival() + state.absorbed(), 1.0, 1e-13);
    const auto mass = state.mass();
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if ((static_cast<std::int64_t>(i) - state.time()) % 2 != 0) ASSERT_EQ(mass[i], 0.0);
      ASSERT_GE(mass[i], 0.0);
    }
    state.advance();
  }
}

TEST(ExpectedEscape, SymmetricIsSquare) {
  for (std::int64_t n = 2; n <= 10; ++n) {
    const auto e = erw::exact_expected_escape(n, 0.5);
    EXPECT_NEAR(e.expectation, static_cast<double>(n * n), 1e-9 + e.truncation_bound) << n;
    EXPECT_GE(e.truncation_bound, 0.0);
    EXPECT_LT(e.truncation_bound, 1e-8);
  }
}

TEST(ExpectedEscape, FrozenValues) {
  struct Case {
    std::int64_t n;
    double p;
    double value;
  };
  const Case cases[] = {
      {2, 0.1, 6.39763646372284283},  {2, 0.3, 5.09241256126578360}, {2, 0.5, 4.0},
      {2, 0.6, 3.52333917024929828},  {2, 0.9, 2.32944666400422894}, {4, 0.6, 13.424783419852304},
      {6, 0.7, 23.260023181018088},   {3, 0.25, 12.313708498984694},
  };
  for (const auto& c : cases) {
    const auto e = erw::exact_expected_escape(c.n, c.p);
    EXPECT_NEAR(e.expectation, c.value, 1e-9 + e.truncation_bound) << c.n << " " << c.p;
  }
}

TEST(ExpectedEscape, NormalizedMeans) {
  struct Case {
    std::int64_t n;
    double p;
    double normalized;
  };
  const Case cases[] = {{5, 0.25, 1.36315}, {10, 0.25, 1.35855}, {20, 0.25, 1.35734},
                        {5, 0.7, 0.65897},  {10, 0.7, 0.61768},  {20, 0.7, 0.59015}};
  for (const auto& c : cases) {
    const auto e = erw::exact_expected_escape(c.n, c.p);
    EXPECT_NEAR(e.expectation / static_cast<double>(c.n * c.n), c.normalized, 6e-6) << c.n << " " << c.p;
  }
}

TEST(ExpectedEscape, BudgetAndArguments) {
  EXPECT_THROW(erw::exact_expected_escape(20, 0.5, 1e-12, 50), erw::BudgetExceeded);
  EXPECT_THROW(erw::exact_expected_escape(1, 0.5), std::invalid_argument);
  EXPECT_THROW(erw::exact_expected_escape(5, 0.5, 1e-3), std::invalid_argument);
  EXPECT_THROW(erw::exact_expected_escape(5, 0.5, 0.0), std::invalid_argument);
}

TEST(SrwDuration, ClosedForms) {
  EXPECT_EQ(erw::srw_expected_duration(7, 0, 0.5), 49.0);
  EXPECT_EQ(erw::srw_expected_duration(7, 3, 0.5), 40.0);
  EXPECT_NEAR(erw::srw_expected_duration(4, 0, 0.6), 13.4020618556701030928, 1e-12);
  EXPECT_NEAR(erw::srw_expected_duration(10, 0, 0.45), 76.2998937319742465, 1e-11);
  EXPECT_THROW(erw::srw_expected_duration(4, 1, 0.6), std::invalid_argument);
  EXPECT_THROW(erw::srw_expected_duration(4, 4, 0.5), std::invalid_argument);
}

TEST(AsymRuin, FrozenValues) {
  EXPECT_NEAR(erw::asym_ruin_probability(1, 10, 0.55), 0.118500531340128767, 1e-15);
  EXPECT_NEAR(erw::asym_ruin_probability(2, 10, 0.58), 0.00156943669842426329, 1e-17);
}

TEST(AsymRuin, LogSpaceMatchesDirectEvaluation) {
  for (const std::int64_t a : {1, 2, 5}) {
    for (const std::int64_t n : {1, 10, 40}) {
      for (const double up : {0.05, 0.3, 0.49, 0.501, 0.55, 0.8, 0.97}) {
        const double direct = erw::oracle::asym_ruin_direct(a, n, up);
        if (!std::isfinite(direct)) continue;
        EXPECT_NEAR(erw::asym_ruin_probability(a, n, up), direct, 1e-12) << a << " " << n << " " << up;
      }
    }
  }
}

TEST(AsymRuin, ApproachesHalfNearSymmetry) {
  EXPECT_NEAR(erw::asym_ruin_probability(1, 10, 0.5 + 1e-9), 0.5, 1e-7);
  EXPECT_NEAR(erw::asym_ruin_probability(1, 10, 0.5 - 1e-9), 0.5, 1e-7);
}

TEST(AsymRuin, SymmetryAndLimits) {
  const double up = erw::asym_ruin_probability(3, 5, 0.6);
  const double down = erw::asym_ruin_probability(3, 5, 0.4);
  EXPECT_NEAR(up + down, 1.0, 1e-14);
  EXPECT_EQ(erw::asym_ruin_probability(1000, 1000, 0.51), 0.0);
  EXPECT_EQ(erw::asym_ruin_probability(1000, 1000, 0.49), 1.0);
  EXPECT_THROW(erw::asym_ruin_probability(1, 10, 0.5), std::invalid_argument);
  EXPECT_THROW(erw::asym_ruin_probability(0, 10, 0.6), std::invalid_argument);
}

}  // namespace
