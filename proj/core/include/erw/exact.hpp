#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "erw/survival.hpp"

namespace erw {

/// Forward distribution of |Z_n| killed at the barrier N.
///
/// Starts at time 1 with all mass on state 1 (the first step is forced).
/// States run over 0..N-1; mass that steps onto N moves into absorbed().
/// Only states with the parity of the current time carry mass.
class AbsorbingDPState {
 public:
  /// Throws std::invalid_argument unless barrier >= 1 and 0 < p < 1.
  static AbsorbingDPState initial(std::int64_t barrier, double p);

  /// Push the distribution one step through the kernel at the current time.
  void advance();

  std::int64_t barrier() const noexcept { return barrier_; }
  double p() const noexcept { return p_; }
  std::int64_t time() const noexcept { return time_; }
  std::span<const double> mass() const noexcept { return mass_; }
  double absorbed() const noexcept { return absorbed_; }

  /// P(tau_N > time()), the total surviving mass.
  double survival() const noexcept;

 private:
  AbsorbingDPState(std::int64_t barrier, double p);

  std::int64_t barrier_;
  double p_;
  std::int64_t time_ = 1;
  double absorbed_ = 0.0;
  std::vector<double> mass_;
  std::vector<double> scratch_;
};

/// Exact P(tau_N > t) for t = 0..t_max.
SurvivalCurve exact_survival(std::int64_t barrier, double p, std::int64_t t_max);

struct ExpectedEscape {
  std::int64_t barrier = 0;
  double p = 0.5;
  double expectation = 0.0;       // sum of P(tau_N > t) up to truncation
  double truncation_bound = 0.0;  // geometric estimate of the omitted tail
  std::int64_t steps = 0;         // last time summed
};

/// E[tau_N] as the sum of the survival function, stopped once survival falls
/// below tail_eps. The omitted tail is estimated from the per-step decay ratio
/// over the last factor of ten of the curve. Throws BudgetExceeded if survival
/// is still above tail_eps at hard_cap (0 selects 10^4 N^2).
ExpectedEscape exact_expected_escape(std::int64_t barrier, double p, double tail_eps = 1e-12,
                                     std::int64_t hard_cap = 0);

/// Expected gambler's-ruin duration of a simple walk on (-N, N).
/// q = 1/2: (N - x)(N + x) from any |x| < N. Otherwise x must be 0 and the
/// result is N/(2q - 1) * (1 - r^N)/(1 + r^N) with r = (1 - q)/q.
double srw_expected_duration(std::int64_t barrier, std::int64_t start, double q);

/// P(T_0 < T_{2AN}) for a walk started at AN with up-probability p_N != 1/2:
/// rho^{AN} / (rho^{AN} + 1), rho = (1 - p_N)/p_N, evaluated in log space.
double asym_ruin_probability(std::int64_t a, std::int64_t barrier, double up_probability);

}  // namespace erw
