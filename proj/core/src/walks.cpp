#include "erw/walks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace erw {

namespace {

void require_horizon(std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1, got " + std::to_string(horizon));
}

}  // namespace

std::string_view to_string(Representation representation) {
  switch (representation) {
    case Representation::Kernel: return "kernel";
    case Representation::Memory: return "memory";
    case Representation::Urn: return "urn";
  }
  return "unknown";
}

std::optional<Representation> parse_representation(std::string_view text) {
  if (text == "kernel") return Representation::Kernel;
  if (text == "memory") return Representation::Memory;
  if (text == "urn") return Representation::Urn;
  return std::nullopt;
}

WalkParams::WalkParams(double p, Representation representation) : p_(p), representation_(representation) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("memory parameter p must lie in (0,1)");
}

AsymParams::AsymParams(double up_probability) : up_(up_probability) {
  if (!(up_probability > 0.0 && up_probability < 1.0))
    throw std::invalid_argument("up_probability must lie in (0,1)");
}

double erw_up_probability(double p, std::int64_t n, std::int64_t i, Chain chain) {
  if (n < 1) throw std::invalid_argument("kernel is defined for n >= 1");
  if (i > n || i < -n) throw std::invalid_argument("state unreachable: |i| > n");
  if (chain == Chain::Absolute) {
    if (i < 0) throw std::invalid_argument("absolute chain state must be >= 0");
    if (i == 0) return 1.0;
  }
  return 0.5 + (2.0 * p - 1.0) * static_cast<double>(i) / (2.0 * static_cast<double>(n));
}

std::int64_t step_abs_erw(std::int64_t state, std::int64_t n, double u, double p) {
  if (state == 0) return 1;
  return u < erw_up_probability(p, n, state, Chain::Absolute) ? state + 1 : state - 1;
}

std::int64_t step_srw(std::int64_t state, double u) noexcept { return u < 0.5 ? state + 1 : state - 1; }

std::int64_t step_reflected_srw(std::int64_t state, double u) noexcept {
  if (state == 0) return 1;
  return step_srw(state, u);
}

std::int64_t step_asym_srw(std::int64_t state, double u, const AsymParams& params) noexcept {
  return u < params.up_probability() ? state + 1 : state - 1;
}

Trajectory simulate_abs_erw(const WalkParams& params, std::int64_t horizon, UniformStream& stream) {
  require_horizon(horizon);
  Trajectory out{std::vector<std::int64_t>(static_cast<std::size_t>(horizon) + 1, 0), params, true};
  std::int64_t state = 0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    // Step k moves from time k-1 to k and always consumes U_k.
    const double u = stream.next_uniform();
    state = step_abs_erw(state, k - 1, u, params.p());
    out.positions[static_cast<std::size_t>(k)] = state;
  }
  return out;
}

Trajectory simulate_signed_erw_memory(const WalkParams& params, std::int64_t horizon,
                                      UniformStream& stream) {
  require_horizon(horizon);
  Trajectory out{std::vector<std::int64_t>(static_cast<std::size_t>(horizon) + 1, 0), params, false};
  std::vector<std::int8_t> steps;
  steps.reserve(static_cast<std::size_t>(horizon));
  steps.push_back(1);
  out.positions[1] = 1;
  for (std::int64_t n = 1; n < horizon; ++n) {
    const double pick = stream.next_uniform();
    const double repeat = stream.next_uniform();
    const auto k = std::min(static_cast<std::int64_t>(pick * static_cast<double>(n)), n - 1);
    const std::int8_t remembered = steps[static_cast<std::size_t>(k)];
    const std::int8_t step = repeat < params.p() ? remembered : static_cast<std::int8_t>(-remembered);
    steps.push_back(step);
    out.positions[static_cast<std::size_t>(n) + 1] = out.positions[static_cast<std::size_t>(n)] + step;
  }
  return out;
}

Trajectory simulate_urn(const WalkParams& params, std::int64_t horizon, UniformStream& stream) {
  require_horizon(horizon);
  Trajectory out{std::vector<std::int64_t>(static_cast<std::size_t>(horizon) + 1, 0), params, false};
  // The initial green ball is the first (forced) win.
  std::int64_t green = 1;
  out.positions[1] = 1;
  for (std::int64_t balls = 1; balls < horizon; ++balls) {
    const double draw = stream.next_uniform();
    const double keep = stream.next_uniform();
    const bool drew_green = draw * static_cast<double>(balls) < static_cast<double>(green);
    const bool added_green = (keep < params.p()) == drew_green;
    if (added_green) ++green;
    out.positions[static_cast<std::size_t>(balls) + 1] =
        out.positions[static_cast<std::size_t>(balls)] + (added_green ? 1 : -1);
  }
  return out;
}

Trajectory simulate(const WalkParams& params, std::int64_t horizon, UniformStream& stream) {
  switch (params.representation()) {
    case Representation::Kernel: return simulate_abs_erw(params, horizon, stream);
    case Representation::Memory: return simulate_signed_erw_memory(params, horizon, stream);
    case Representation::Urn: return simulate_urn(params, horizon, stream);
  }
  throw std::invalid_argument("unknown representation");
}

std::optional<std::int64_t> abs_erw_escape_time(double p, std::int64_t barrier, std::int64_t cap,
                                                UniformStream& stream) {
  if (barrier < 1) throw std::invalid_argument("barrier must be >= 1");
  std::int64_t state = 0;
  for (std::int64_t k = 1; k <= cap; ++k) {
    state = step_abs_erw(state, k - 1, stream.next_uniform(), p);
    if (state == barrier) return k;
  }
  return std::nullopt;
}

std::optional<std::int64_t> srw_escape_time(std::int64_t barrier, std::int64_t cap, UniformStream& stream) {
  if (barrier < 1) throw std::invalid_argument("barrier must be >= 1");
  std::int64_t state = 0;
  for (std::int64_t k = 1; k <= cap; ++k) {
    state = step_reflected_srw(state, stream.next_uniform());
    if (state == barrier) return k;
  }
  return std::nullopt;
}

}  // namespace erw
