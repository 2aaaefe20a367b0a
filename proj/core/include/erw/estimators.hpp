#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "erw/parallel.hpp"
#include "erw/stats.hpp"
#include "erw/survival.hpp"
#include "erw/walks.hpp"

namespace erw {

// Every estimator draws replicate r of an experiment from
// StreamKey{seed, replicate_offset + r, WalkDriver} and reduces results in
// replicate order, so outputs depend on the seed only.

inline constexpr std::int64_t kCensored = -1;

/// Escape time per replicate, kCensored where the cap was reached first.
std::vector<std::int64_t> simulate_escape_times(double p, std::int64_t barrier, std::int64_t replicates,
                                                const RunOptions& options, std::int64_t horizon_cap,
                                                std::uint64_t replicate_offset = 0);

struct Quantiles {
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

struct EscapeSummary {
  double p = 0.5;
  std::int64_t barrier = 0;
  std::int64_t replicates = 0;
  std::int64_t censored = 0;
  std::int64_t horizon_cap = 0;
  /// Raw per-replicate times (kCensored marks censoring), kept below the retain cap.
  std::optional<std::vector<std::int64_t>> escape_times;
  // Moments over uncensored replicates. Censored ones are counted, never imputed.
  double mean = 0.0;
  double variance = 0.0;
  Quantiles quantiles;  // censored replicates rank above every observed time
  double mean_ci_halfwidth = 0.0;  // 99%
};

/// Monte Carlo escape times of the reflected elephant walk.
/// horizon_cap <= 0 selects 10^4 N^2. Throws BudgetExceeded if more than a
/// 1e-3 fraction of replicates is censored.
EscapeSummary mc_escape_times(double p, std::int64_t barrier, std::int64_t replicates, const RunOptions& options,
                              std::int64_t horizon_cap = 0, std::size_t retain_cap = std::size_t{1} << 22,
                              std::uint64_t replicate_offset = 0);

EscapeSummary summarize_escape_times(double p, std::int64_t barrier, std::int64_t horizon_cap,
                                     std::vector<std::int64_t> times, std::size_t retain_cap);

/// Empirical survival on `grid` with 99% binomial half-widths.
SurvivalCurve mc_survival_curve(const std::vector<std::int64_t>& times, std::int64_t barrier, double p,
                                std::int64_t horizon_cap, const std::vector<std::int64_t>& grid);

struct PointCheck {
  std::int64_t t = 0;
  double exact = 0.0;
  double estimate = 0.0;
  Interval band;
  bool inside = false;
};

/// Pointwise check that the exact survival lies inside the z-sigma binomial
/// band of the Monte Carlo estimate at every grid time.
std::vector<PointCheck> compare_survival(const std::vector<std::int64_t>& times, const SurvivalCurve& exact,
                                         const std::vector<std::int64_t>& grid, double z);

struct TailFit {
  std::int64_t barrier = 0;
  double p = 0.5;
  std::int64_t t_lo = 0;
  std::int64_t t_hi = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  CurveSource source = CurveSource::Exact;
};

/// Least-squares line through (t, ln survival) for points with survival in
/// [lower, upper]. Throws std::invalid_argument with fewer than 10 points or a
/// non-negative slope.
TailFit fit_tail(const SurvivalCurve& curve, double lower = 1e-6, double upper = 1e-2);

/// Exact curve from t = 0 until survival first drops below `floor`.
SurvivalCurve exact_survival_until(std::int64_t barrier, double p, double floor);

/// Tail fit on the exact curve for N <= 30, otherwise on a Monte Carlo curve
/// whose window floor is raised to 100 / replicates.
TailFit fit_tail_auto(double p, std::int64_t barrier, std::int64_t replicates, const RunOptions& options,
                      double lower = 1e-6, double upper = 1e-2);

struct ThetaEntry {
  std::int64_t barrier = 0;
  double normalized_mean = 0.0;  // E[tau_N] / N^2
  double sigma = 0.0;            // standard error of normalized_mean
  double ci = 0.0;               // 99% half-width
  std::int64_t censored = 0;
};

struct ThetaEstimate {
  double p = 0.5;
  std::vector<ThetaEntry> entries;
  double theta = 0.0;  // largest-N normalized mean
};

/// Normalized mean escape times on an ascending grid of N (all >= 2), p < 3/4.
ThetaEstimate estimate_theta(double p, const std::vector<std::int64_t>& barriers, std::int64_t replicates,
                             const RunOptions& options);

enum class BoundKind { Markov, Kolmogorov };

std::string_view to_string(BoundKind kind);

struct BoundCheck {
  double c = 0.0;
  BoundKind kind = BoundKind::Markov;
  std::int64_t threshold_time = 0;  // floor(c N^2)
  double empirical = 0.0;           // P(sigma_N > c N^2)
  double sigma = 0.0;
  double bound = 0.0;               // 1/c (upper) or 1 - c (lower)
  bool passed = false;              // at 3 sigma
};

/// Simple-walk checks P(sigma_N > cN^2) <= 1/c for c >= 1 and >= 1 - c for c < 1.
std::vector<BoundCheck> verify_markov_kolmogorov_bounds(std::int64_t barrier, const std::vector<double>& c_values,
                                                        std::int64_t replicates, const RunOptions& options);

struct KsPair {
  Representation first = Representation::Kernel;
  Representation second = Representation::Kernel;
  double statistic = 0.0;
  double critical = 0.0;
  bool passed = false;
};

struct RepresentationCheck {
  double p = 0.5;
  std::int64_t horizon = 0;
  std::int64_t replicates = 0;
  double alpha = 0.01;
  std::vector<KsPair> pairs;
};

/// |Z_n| samples from each representation (independent streams), compared by
/// pairwise two-sample KS tests at level alpha.
RepresentationCheck check_representations(double p, std::int64_t horizon, std::int64_t replicates,
                                          const RunOptions& options, double alpha = 0.01);

/// |Z_horizon| for `replicates` independent runs of one representation.
std::vector<double> sample_abs_endpoint(const WalkParams& params, std::int64_t horizon, std::int64_t replicates,
                                        const RunOptions& options, std::uint64_t replicate_offset = 0);

}  // namespace erw
