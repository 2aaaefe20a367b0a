#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "erw/parallel.hpp"
#include "erw/rng.hpp"

namespace erw {

/// Covariance K(s, t) = s/(3-4p) (t/s)^(2p-1), s <= t, on the grid t_i = (i+1) h.
///
/// K factors as D M D with D = diag(t^(2p-1)) and M(s, t) = r(min(s, t)),
/// r(t) = t^(3-4p)/(3-4p) increasing. M is a Brownian covariance in the clock
/// r, whose Cholesky factor has entries sqrt(r_j - r_{j-1}) on and below the
/// diagonal. Hence the Cholesky factor of K is
///   L[i][j] = t_i^(2p-1) sqrt(r_j - r_{j-1}),  j <= i,
/// stored in O(n) and applied in O(1) per grid point.
class GaussianGrid {
 public:
  double p() const noexcept { return p_; }
  double step() const noexcept { return step_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return scale_.size(); }

  double time(std::size_t i) const noexcept { return static_cast<double>(i + 1) * step_; }
  double covariance(std::size_t i, std::size_t j) const;
  /// Entry of the lower-triangular factor L with L L^T = K.
  double factor(std::size_t i, std::size_t j) const;
  /// Diagonal jitter added to K before factoring; zero for the closed form.
  double jitter() const noexcept { return jitter_; }

  double scale(std::size_t i) const noexcept { return scale_[i]; }
  double clock_increment_root(std::size_t j) const noexcept { return root_increment_[j]; }

 private:
  friend GaussianGrid build_covariance(double p, double horizon, double step);

  double p_ = 0.5;
  double step_ = 0.0;
  double horizon_ = 0.0;
  double jitter_ = 0.0;
  std::vector<double> scale_;           // t_i^(2p-1)
  std::vector<double> root_increment_;  // sqrt(r_i - r_{i-1})
};

inline constexpr std::size_t kMaxGridPoints = 20'000'000;

/// Requires 0 < p < 3/4 and 0 < step < horizon; throws std::invalid_argument
/// otherwise, and std::runtime_error if the factor cannot be formed.
GaussianGrid build_covariance(double p, double horizon, double step);

struct LimitProcessSample {
  std::vector<double> path;         // W on the grid, up to the crossing when stopped early
  std::optional<double> nu;         // first grid time with |W| >= 1
  std::optional<std::size_t> nu_index;

  bool censored() const noexcept { return !nu.has_value(); }
};

/// W = L z with z drawn by inverse CDF, generated up to the first grid
/// crossing of +-1 (censored if none by the horizon). keep_path = false
/// skips storing W.
LimitProcessSample sample_hitting_time(const GaussianGrid& grid, UniformStream& stream, bool keep_path = true);

/// The whole path W on the grid, with no stopping.
std::vector<double> sample_path(const GaussianGrid& grid, UniformStream& stream);

struct LimitThetaEstimate {
  double p = 0.5;
  double step = 0.0;
  double horizon = 0.0;
  std::int64_t replicates = 0;
  double theta_hat = 0.0;  // mean of nu over uncensored replicates
  double sigma = 0.0;      // standard error
  double ci = 0.0;         // 99% half-width
  double censored_fraction = 0.0;
};

/// Replicate r reads StreamKey{seed, r, LimitProcess}.
LimitThetaEstimate estimate_theta_limit(double p, double step, double horizon, std::int64_t replicates,
                                        const RunOptions& options);

}  // namespace erw
