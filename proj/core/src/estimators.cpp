#include "erw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "erw/error.hpp"
#include "erw/exact.hpp"

namespace erw {

namespace {

__extension__ typedef __int128 Int128;

constexpr double kMaxCensoredFraction = 1e-3;
constexpr std::uint64_t kBlockStride = std::uint64_t{1} << 40;

std::int64_t default_cap(std::int64_t barrier) { return 10000 * barrier * barrier; }

void require_barrier(std::int64_t barrier) {
  if (barrier < 2) throw std::invalid_argument("barrier N must be >= 2");
}

void require_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("memory parameter p must lie in (0,1)");
}

// Survivor counts past each grid time; censored replicates survive every t <= cap.
std::vector<std::int64_t> survivors_at(const std::vector<std::int64_t>& times, std::int64_t horizon_cap,
                                       const std::vector<std::int64_t>& grid) {
  std::vector<std::int64_t> sorted;
  sorted.reserve(times.size());
  for (const auto t : times) sorted.push_back(t == kCensored ? std::numeric_limits<std::int64_t>::max() : t);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::int64_t> out;
  out.reserve(grid.size());
  for (const auto t : grid) {
    if (t > horizon_cap) throw std::invalid_argument("grid time beyond the censoring cap");
    const auto alive = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    out.push_back(static_cast<std::int64_t>(alive));
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> simulate_escape_times(double p, std::int64_t barrier, std::int64_t replicates,
                                                const RunOptions& options, std::int64_t horizon_cap,
                                                std::uint64_t replicate_offset) {
  require_p(p);
  if (barrier < 1) throw std::invalid_argument("barrier must be >= 1");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (horizon_cap <= 0) horizon_cap = default_cap(barrier);
  std::vector<std::int64_t> times(static_cast<std::size_t>(replicates), kCensored);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream({options.seed, replicate_offset + static_cast<std::uint64_t>(r), Purpose::WalkDriver});
    if (const auto hit = abs_erw_escape_time(p, barrier, horizon_cap, stream)) {
      times[static_cast<std::size_t>(r)] = *hit;
    }
  });
  return times;
}

EscapeSummary summarize_escape_times(double p, std::int64_t barrier, std::int64_t horizon_cap,
                                     std::vector<std::int64_t> times, std::size_t retain_cap) {
  EscapeSummary out;
  out.p = p;
  out.barrier = barrier;
  out.horizon_cap = horizon_cap;
  out.replicates = static_cast<std::int64_t>(times.size());

  // Integer sums are exact, so the moments do not depend on summation order.
  Int128 sum = 0;
  Int128 squares = 0;
  std::vector<std::int64_t> observed;
  observed.reserve(times.size());
  for (const auto t : times) {
    if (t == kCensored) {
      ++out.censored;
      continue;
    }
    observed.push_back(t);
    sum += t;
    squares += static_cast<Int128>(t) * t;
  }
  const auto n = static_cast<Int128>(observed.size());
  if (n > 0) {
    out.mean = static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(n));
  }
  if (n > 1) {
    const Int128 numerator = n * squares - sum * sum;
    out.variance = static_cast<double>(static_cast<long double>(numerator) /
                                       (static_cast<long double>(n) * static_cast<long double>(n - 1)));
    out.mean_ci_halfwidth = kZ99 * std::sqrt(out.variance / static_cast<double>(observed.size()));
  }

  std::sort(observed.begin(), observed.end());
  auto quantile = [&](double q) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(times.size())));
    const std::size_t idx = rank == 0 ? 0 : rank - 1;
    return idx < observed.size() ? static_cast<double>(observed[idx]) : std::numeric_limits<double>::infinity();
  };
  if (!times.empty()) out.quantiles = {quantile(0.5), quantile(0.9), quantile(0.99)};
  if (times.size() <= retain_cap) out.escape_times = std::move(times);
  return out;
}

EscapeSummary mc_escape_times(double p, std::int64_t barrier, std::int64_t replicates, const RunOptions& options,
                              std::int64_t horizon_cap, std::size_t retain_cap, std::uint64_t replicate_offset) {
  require_barrier(barrier);
  if (horizon_cap <= 0) horizon_cap = default_cap(barrier);
  auto times = simulate_escape_times(p, barrier, replicates, options, horizon_cap, replicate_offset);
  const auto censored = std::count(times.begin(), times.end(), kCensored);
  if (static_cast<double>(censored) > kMaxCensoredFraction * static_cast<double>(replicates)) {
    throw BudgetExceeded(std::to_string(censored) + " of " + std::to_string(replicates) +
                         " replicates censored at cap " + std::to_string(horizon_cap) + "; raise --horizon-cap");
  }
  return summarize_escape_times(p, barrier, horizon_cap, std::move(times), retain_cap);
}

SurvivalCurve mc_survival_curve(const std::vector<std::int64_t>& times, std::int64_t barrier, double p,
                                std::int64_t horizon_cap, const std::vector<std::int64_t>& grid) {
  if (times.empty()) throw std::invalid_argument("no escape times");
  const auto alive = survivors_at(times, horizon_cap, grid);
  const auto n = static_cast<std::int64_t>(times.size());
  SurvivalCurve curve{barrier, p, grid, {}, CurveSource::MonteCarlo, std::vector<double>{}};
  for (const auto count : alive) {
    const double estimate = static_cast<double>(count) / static_cast<double>(n);
    const auto band = binomial_interval(count, n, kZ99);
    curve.survival.push_back(estimate);
    curve.ci_halfwidth->push_back(std::max(estimate - band.lower, band.upper - estimate));
  }
  return curve;
}

std::vector<PointCheck> compare_survival(const std::vector<std::int64_t>& times, const SurvivalCurve& exact,
                                         const std::vector<std::int64_t>& grid, double z) {
  if (times.empty()) throw std::invalid_argument("no escape times");
  const auto alive = survivors_at(times, std::numeric_limits<std::int64_t>::max(), grid);
  const auto n = static_cast<std::int64_t>(times.size());
  std::vector<PointCheck> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    PointCheck check;
    check.t = grid[i];
    check.exact = exact.at(grid[i]);
    check.estimate = static_cast<double>(alive[i]) / static_cast<double>(n);
    check.band = binomial_interval(alive[i], n, z);
    check.inside = check.band.contains(check.exact);
    out.push_back(check);
  }
  return out;
}

TailFit fit_tail(const SurvivalCurve& curve, double lower, double upper) {
  if (!(lower > 0.0 && lower < upper)) throw std::invalid_argument("fit window needs 0 < lower < upper");
  std::vector<double> x;
  std::vector<double> y;
  TailFit fit;
  fit.barrier = curve.barrier;
  fit.p = curve.p;
  fit.source = curve.source;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double s = curve.survival[i];
    if (s < lower || s > upper) continue;
    if (x.empty()) fit.t_lo = curve.times[i];
    fit.t_hi = curve.times[i];
    x.push_back(static_cast<double>(curve.times[i]));
    y.push_back(std::log(s));
  }
  if (x.size() < 10) {
    throw std::invalid_argument("only " + std::to_string(x.size()) + " curve points in the fit window (need 10)");
  }
  const auto line = least_squares(x, y);
  if (!(line.slope < 0.0)) throw std::invalid_argument("log-survival is not decreasing on the fit window");
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.points = line.points;
  return fit;
}

SurvivalCurve exact_survival_until(std::int64_t barrier, double p, double floor) {
  require_barrier(barrier);
  if (!(floor > 0.0 && floor < 1.0)) throw std::invalid_argument("floor must lie in (0,1)");
  auto state = AbsorbingDPState::initial(barrier, p);
  SurvivalCurve curve{barrier, p, {0}, {1.0}, CurveSource::Exact, std::nullopt};
  const std::int64_t cap = default_cap(barrier);
  while (true) {
    const double s = state.survival();
    curve.times.push_back(state.time());
    curve.survival.push_back(s);
    if (s < floor) break;
    if (state.time() >= cap) throw BudgetExceeded("survival above floor at the step cap");
    state.advance();
  }
  return curve;
}

TailFit fit_tail_auto(double p, std::int64_t barrier, std::int64_t replicates, const RunOptions& options,
                      double lower, double upper) {
  if (barrier <= 30) return fit_tail(exact_survival_until(barrier, p, lower / 2.0), lower, upper);
  const std::int64_t cap = default_cap(barrier);
  const auto times = simulate_escape_times(p, barrier, replicates, options, cap);
  std::int64_t last = 0;
  for (const auto t : times) last = std::max(last, t);
  std::vector<std::int64_t> grid(static_cast<std::size_t>(last) + 1);
  for (std::int64_t t = 0; t <= last; ++t) grid[static_cast<std::size_t>(t)] = t;
  const auto curve = mc_survival_curve(times, barrier, p, cap, grid);
  const double floor = std::max(lower, 100.0 / static_cast<double>(replicates));
  return fit_tail(curve, floor, upper);
}

ThetaEstimate estimate_theta(double p, const std::vector<std::int64_t>& barriers, std::int64_t replicates,
                             const RunOptions& options) {
  if (!(p > 0.0 && p < 0.75)) throw std::invalid_argument("theta is defined for 0 < p < 3/4");
  if (barriers.empty()) throw std::invalid_argument("N grid is empty");
  for (std::size_t i = 0; i < barriers.size(); ++i) {
    require_barrier(barriers[i]);
    if (i > 0 && barriers[i] <= barriers[i - 1]) throw std::invalid_argument("N grid must be ascending");
  }
  ThetaEstimate out;
  out.p = p;
  for (std::size_t i = 0; i < barriers.size(); ++i) {
    const auto n = barriers[i];
    const auto summary = mc_escape_times(p, n, replicates, options, 0, 0, i * kBlockStride);
    const auto scale = static_cast<double>(n * n);
    ThetaEntry entry;
    entry.barrier = n;
    entry.normalized_mean = summary.mean / scale;
    const auto observed = static_cast<double>(summary.replicates - summary.censored);
    entry.sigma = std::sqrt(summary.variance / observed) / scale;
    entry.ci = kZ99 * entry.sigma;
    entry.censored = summary.censored;
    out.entries.push_back(entry);
  }
  out.theta = out.entries.back().normalized_mean;
  return out;
}

std::string_view to_string(BoundKind kind) { return kind == BoundKind::Markov ? "markov" : "kolmogorov"; }

std::vector<BoundCheck> verify_markov_kolmogorov_bounds(std::int64_t barrier, const std::vector<double>& c_values,
                                                        std::int64_t replicates, const RunOptions& options) {
  require_barrier(barrier);
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (c_values.empty()) throw std::invalid_argument("no c values");
  std::vector<BoundCheck> checks;
  std::int64_t longest = 0;
  for (const double c : c_values) {
    if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
    BoundCheck check;
    check.c = c;
    check.kind = c >= 1.0 ? BoundKind::Markov : BoundKind::Kolmogorov;
    check.threshold_time = static_cast<std::int64_t>(std::floor(c * static_cast<double>(barrier * barrier)));
    check.bound = check.kind == BoundKind::Markov ? 1.0 / c : 1.0 - c;
    longest = std::max(longest, check.threshold_time);
    checks.push_back(check);
  }

  // One walk per replicate serves every c; the cap sits one step past the
  // longest threshold so survival past it is decided.
  std::vector<std::int64_t> times(static_cast<std::size_t>(replicates), kCensored);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream({options.seed, static_cast<std::uint64_t>(r), Purpose::WalkDriver});
    if (const auto hit = srw_escape_time(barrier, longest + 1, stream)) times[static_cast<std::size_t>(r)] = *hit;
  });

  const auto n = static_cast<double>(replicates);
  for (auto& check : checks) {
    std::int64_t alive = 0;
    for (const auto t : times) alive += (t == kCensored || t > check.threshold_time) ? 1 : 0;
    check.empirical = static_cast<double>(alive) / n;
    check.sigma = std::sqrt(check.empirical * (1.0 - check.empirical) / n);
    check.passed = check.kind == BoundKind::Markov ? check.empirical <= check.bound + 3.0 * check.sigma
                                                   : check.empirical >= check.bound - 3.0 * check.sigma;
  }
  return checks;
}

std::vector<double> sample_abs_endpoint(const WalkParams& params, std::int64_t horizon, std::int64_t replicates,
                                        const RunOptions& options, std::uint64_t replicate_offset) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(replicates), 0.0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream({options.seed, replicate_offset + static_cast<std::uint64_t>(r), Purpose::WalkDriver});
    const auto trajectory = simulate(params, horizon, stream);
    out[static_cast<std::size_t>(r)] = static_cast<double>(std::abs(trajectory.positions.back()));
  });
  return out;
}

RepresentationCheck check_representations(double p, std::int64_t horizon, std::int64_t replicates,
                                          const RunOptions& options, double alpha) {
  const Representation kinds[] = {Representation::Kernel, Representation::Memory, Representation::Urn};
  std::vector<std::vector<double>> samples;
  for (std::size_t i = 0; i < 3; ++i) {
    samples.push_back(sample_abs_endpoint(WalkParams(p, kinds[i]), horizon, replicates, options, i * kBlockStride));
  }
  RepresentationCheck out{p, horizon, replicates, alpha, {}};
  const double critical = ks_critical_two_sample(samples[0].size(), samples[0].size(), alpha);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      KsPair pair{kinds[i], kinds[j], ks_statistic(samples[i], samples[j]), critical, false};
      pair.passed = pair.statistic <= critical;
      out.pairs.push_back(pair);
    }
  }
  return out;
}

}  // namespace erw
