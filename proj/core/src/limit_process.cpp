#include "erw/limit_process.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "erw/stats.hpp"

namespace erw {

double GaussianGrid::covariance(std::size_t i, std::size_t j) const {
  const double s = time(std::min(i, j));
  const double t = time(std::max(i, j));
  return s / (3.0 - 4.0 * p_) * std::pow(t / s, 2.0 * p_ - 1.0);
}

double GaussianGrid::factor(std::size_t i, std::size_t j) const {
  if (j > i) return 0.0;
  return scale_[i] * root_increment_[j];
}

GaussianGrid build_covariance(double p, double horizon, double step) {
  if (!(p > 0.0 && p < 0.75)) throw std::invalid_argument("limit process needs 0 < p < 3/4");
  if (!(step > 0.0 && step < horizon)) throw std::invalid_argument("grid needs 0 < h < T");
  const double points = std::floor(horizon / step * (1.0 + 1e-12));
  if (points > static_cast<double>(kMaxGridPoints)) {
    throw std::invalid_argument("grid has " + std::to_string(points) + " points; limit is " +
                                std::to_string(kMaxGridPoints));
  }
  const auto n = static_cast<std::size_t>(points);

  GaussianGrid grid;
  grid.p_ = p;
  grid.step_ = step;
  grid.horizon_ = horizon;
  grid.scale_.resize(n);
  grid.root_increment_.resize(n);
  const double clock_exponent = 3.0 - 4.0 * p;
  double previous_clock = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.time(i);
    const double clock = std::pow(t, clock_exponent) / clock_exponent;
    const double increment = clock - previous_clock;
    if (!(increment > 0.0) || !std::isfinite(increment)) {
      throw std::runtime_error("covariance factor breaks down at grid point " + std::to_string(i));
    }
    grid.scale_[i] = std::pow(t, 2.0 * p - 1.0);
    grid.root_increment_[i] = std::sqrt(increment);
    previous_clock = clock;
  }
  return grid;
}

LimitProcessSample sample_hitting_time(const GaussianGrid& grid, UniformStream& stream, bool keep_path) {
  LimitProcessSample sample;
  double clock_walk = 0.0;  // (M^(1/2) z)_i, a Brownian motion read at clock r_i
  for (std::size_t i = 0; i < grid.size(); ++i) {
    clock_walk += grid.clock_increment_root(i) * stream.next_normal();
    const double w = grid.scale(i) * clock_walk;
    if (keep_path) sample.path.push_back(w);
    if (std::abs(w) >= 1.0) {
      sample.nu = grid.time(i);
      sample.nu_index = i;
      break;
    }
  }
  return sample;
}

std::vector<double> sample_path(const GaussianGrid& grid, UniformStream& stream) {
  std::vector<double> path(grid.size());
  double clock_walk = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    clock_walk += grid.clock_increment_root(i) * stream.next_normal();
    path[i] = grid.scale(i) * clock_walk;
  }
  return path;
}

LimitThetaEstimate estimate_theta_limit(double p, double step, double horizon, std::int64_t replicates,
                                        const RunOptions& options) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const auto grid = build_covariance(p, horizon, step);
  std::vector<double> hits(static_cast<std::size_t>(replicates), -1.0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream({options.seed, static_cast<std::uint64_t>(r), Purpose::LimitProcess});
    const auto sample = sample_hitting_time(grid, stream, false);
    if (sample.nu) hits[static_cast<std::size_t>(r)] = *sample.nu;
  });

  LimitThetaEstimate out;
  out.p = p;
  out.step = step;
  out.horizon = horizon;
  out.replicates = replicates;
  double sum = 0.0;
  std::int64_t observed = 0;
  for (const double v : hits) {
    if (v < 0.0) continue;
    sum += v;
    ++observed;
  }
  out.censored_fraction = static_cast<double>(replicates - observed) / static_cast<double>(replicates);
  if (observed == 0) return out;
  out.theta_hat = sum / static_cast<double>(observed);
  double squares = 0.0;
  for (const double v : hits) {
    if (v >= 0.0) squares += (v - out.theta_hat) * (v - out.theta_hat);
  }
  if (observed > 1) {
    out.sigma = std::sqrt(squares / static_cast<double>(observed - 1) / static_cast<double>(observed));
  }
  out.ci = kZ99 * out.sigma;
  return out;
}

}  // namespace erw
