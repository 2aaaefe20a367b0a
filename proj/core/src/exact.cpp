#include "erw/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "erw/error.hpp"
#include "erw/walks.hpp"

namespace erw {

AbsorbingDPState::AbsorbingDPState(std::int64_t barrier, double p)
    : barrier_(barrier),
      p_(p),
      mass_(static_cast<std::size_t>(barrier), 0.0),
      scratch_(static_cast<std::size_t>(barrier), 0.0) {}

AbsorbingDPState AbsorbingDPState::initial(std::int64_t barrier, double p) {
  if (barrier < 1) throw std::invalid_argument("barrier must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("memory parameter p must lie in (0,1)");
  AbsorbingDPState state(barrier, p);
  if (barrier == 1) {
    state.absorbed_ = 1.0;
  } else {
    state.mass_[1] = 1.0;
  }
  return state;
}

void AbsorbingDPState::advance() {
  std::fill(scratch_.begin(), scratch_.end(), 0.0);
  const std::int64_t top = std::min(time_, barrier_ - 1);
  for (std::int64_t i = time_ % 2; i <= top; i += 2) {
    const double m = mass_[static_cast<std::size_t>(i)];
    if (m == 0.0) continue;
    if (i == 0) {
      if (barrier_ == 1) absorbed_ += m; else scratch_[1] += m;
      continue;
    }
    const double up = m * erw_up_probability(p_, time_, i, Chain::Absolute);
    const double down = m - up;
    if (i + 1 == barrier_) absorbed_ += up; else scratch_[static_cast<std::size_t>(i) + 1] += up;
    scratch_[static_cast<std::size_t>(i) - 1] += down;
  }
  mass_.swap(scratch_);
  ++time_;
}

double AbsorbingDPState::survival() const noexcept {
  double total = 0.0;
  for (std::int64_t i = time_ % 2; i < barrier_; i += 2) total += mass_[static_cast<std::size_t>(i)];
  return total;
}

SurvivalCurve exact_survival(std::int64_t barrier, double p, std::int64_t t_max) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  auto state = AbsorbingDPState::initial(barrier, p);
  SurvivalCurve curve{barrier, p, {}, {}, CurveSource::Exact, std::nullopt};
  curve.times.reserve(static_cast<std::size_t>(t_max) + 1);
  curve.survival.reserve(static_cast<std::size_t>(t_max) + 1);
  curve.times.push_back(0);
  curve.survival.push_back(1.0);
  for (std::int64_t t = 1; t <= t_max; ++t) {
    if (t > 1) state.advance();
    curve.times.push_back(t);
    curve.survival.push_back(state.survival());
  }
  return curve;
}

ExpectedEscape exact_expected_escape(std::int64_t barrier, double p, double tail_eps, std::int64_t hard_cap) {
  if (barrier < 2) throw std::invalid_argument("barrier must be >= 2");
  if (!(tail_eps > 0.0 && tail_eps <= 1e-6)) throw std::invalid_argument("tail_eps must lie in (0, 1e-6]");
  if (hard_cap <= 0) hard_cap = 10000 * barrier * barrier;

  auto state = AbsorbingDPState::initial(barrier, p);
  std::vector<double> history{1.0};  // history[t] = P(tau > t)
  double total = 1.0;
  while (true) {
    const double s = state.survival();
    history.push_back(s);
    total += s;
    if (s < tail_eps) break;
    if (state.time() >= hard_cap) {
      throw BudgetExceeded("survival still " + std::to_string(s) + " at hard cap t=" + std::to_string(hard_cap));
    }
    state.advance();
  }

  const auto last = static_cast<std::int64_t>(history.size()) - 1;
  const double tail = history.back();
  double remainder = 0.0;
  if (tail > 0.0) {
    // Most recent time at which survival was still ten times larger.
    std::int64_t start = last;
    while (start > 0 && history[static_cast<std::size_t>(start)] < 10.0 * tail) --start;
    const double ratio =
        std::pow(tail / history[static_cast<std::size_t>(start)], 1.0 / static_cast<double>(last - start));
    remainder = ratio < 1.0 ? tail * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
  }
  return {barrier, p, total, remainder, last};
}

double srw_expected_duration(std::int64_t barrier, std::int64_t start, double q) {
  if (barrier < 1) throw std::invalid_argument("barrier must be >= 1");
  if (start >= barrier || start <= -barrier) throw std::invalid_argument("start must satisfy |x| < N");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
  const auto n = static_cast<double>(barrier);
  if (q == 0.5) {
    const auto x = static_cast<double>(start);
    return (n - x) * (n + x);
  }
  if (start != 0) throw std::invalid_argument("asymmetric duration is only provided from x = 0");
  const double r_pow = std::pow((1.0 - q) / q, n);
  return n / (2.0 * q - 1.0) * (1.0 - r_pow) / (1.0 + r_pow);
}

double asym_ruin_probability(std::int64_t a, std::int64_t barrier, double up_probability) {
  if (a < 1 || barrier < 1) throw std::invalid_argument("A and N must be >= 1");
  if (!(up_probability > 0.0 && up_probability < 1.0))
    throw std::invalid_argument("p_N must lie in (0,1)");
  if (up_probability == 0.5) throw std::invalid_argument("p_N = 1/2 is the symmetric case (probability 1/2)");
  const double x = static_cast<double>(a * barrier) * (std::log1p(-up_probability) - std::log(up_probability));
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace erw
