#include "erw/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "erw/exact.hpp"

namespace erw {

namespace {

struct Moments {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Sequential sum over index-ordered slots; identical for any thread count.
Moments moments(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / n;
  double squares = 0.0;
  for (const double v : values) squares += (v - mean) * (v - mean);
  const double variance = values.size() > 1 ? squares / (n - 1.0) : 0.0;
  return {mean, std::sqrt(variance / n)};
}

void require_replicates(std::int64_t replicates) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
}

StreamKey walk_key(const RunOptions& options, std::int64_t r) {
  return {options.seed, static_cast<std::uint64_t>(r), Purpose::WalkDriver};
}

// Collapses per-replicate violation flags into an audit, reporting the lowest
// offending replicate.
CouplingAudit summarize(const std::vector<char>& violated, const RunOptions& options) {
  CouplingAudit audit;
  audit.replicates = static_cast<std::int64_t>(violated.size());
  for (std::size_t r = 0; r < violated.size(); ++r) {
    if (!violated[r]) continue;
    if (!audit.first_violation) audit.first_violation = walk_key(options, static_cast<std::int64_t>(r));
    ++audit.violations;
  }
  return audit;
}

}  // namespace

std::string_view to_string(CouplingMode mode) {
  switch (mode) {
    case CouplingMode::Dominance: return "dominance";
    case CouplingMode::Shifted: return "shifted";
    case CouplingMode::Asymmetric: return "asymmetric";
  }
  return "unknown";
}

std::optional<CouplingMode> parse_coupling_mode(std::string_view text) {
  if (text == "dominance") return CouplingMode::Dominance;
  if (text == "shifted") return CouplingMode::Shifted;
  if (text == "asymmetric") return CouplingMode::Asymmetric;
  return std::nullopt;
}

DistanceProcess distance_process(const CoupledTrace& trace) {
  DistanceProcess out;
  out.values.assign(trace.companion.size(), 0);
  auto event = trace.distance_events.begin();
  std::int64_t count = 0;
  for (std::size_t k = 1; k < out.values.size(); ++k) {
    while (event != trace.distance_events.end() && *event == static_cast<std::int64_t>(k)) {
      ++count;
      ++event;
    }
    out.values[k] = 2 * count;
  }
  return out;
}

CoupledTrace run_dominance_coupling(double p, std::int64_t horizon, UniformStream& stream) {
  const WalkParams params(p);
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const auto start = stream.consumed();
  const auto size = static_cast<std::size_t>(horizon) + 1;

  CoupledTrace trace{Trajectory{std::vector<std::int64_t>(size, 0), params, true},
                     std::vector<std::int64_t>(size, 0),
                     0.5,
                     CouplingMode::Dominance,
                     0,
                     {},
                     0};
  std::int64_t z = 0;
  std::int64_t s = 0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const double u = stream.next_uniform();
    if (z != 0) {
      const double threshold = erw_up_probability(p, k - 1, z, Chain::Absolute);
      if (u >= std::min(threshold, 0.5) && u < std::max(threshold, 0.5)) trace.distance_events.push_back(k);
    }
    z = step_abs_erw(z, k - 1, u, p);
    s = step_reflected_srw(s, u);
    trace.erw.positions[static_cast<std::size_t>(k)] = z;
    trace.companion[static_cast<std::size_t>(k)] = s;
  }
  trace.uniforms_consumed = stream.consumed() - start;
  return trace;
}

ShiftedCoupling run_shifted_coupling(double p, std::int64_t barrier, std::int64_t d, std::int64_t horizon,
                                     UniformStream& stream) {
  const WalkParams params(p);
  if (!(p < 0.5)) throw std::invalid_argument("shifted coupling requires p < 1/2");
  if (barrier < 1) throw std::invalid_argument("barrier must be >= 1");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");

  const auto start = stream.consumed();
  const std::int64_t offset = d * barrier * barrier;
  const std::int64_t counter_length = 12 * barrier * barrier;
  const double counter_lower = 0.5 + (2.0 * p - 1.0) / static_cast<double>(d * barrier);

  ShiftedCoupling out;
  CoupledTrace& trace = out.trace;
  trace.erw = Trajectory{std::vector<std::int64_t>(static_cast<std::size_t>(offset + horizon) + 1, 0), params, true};
  trace.companion.assign(static_cast<std::size_t>(horizon) + 1, 0);
  trace.mode = CouplingMode::Shifted;
  trace.shift_offset = offset;

  std::int64_t z = 0;
  for (std::int64_t k = 1; k <= offset; ++k) {
    z = step_abs_erw(z, k - 1, stream.next_uniform(), p);
    trace.erw.positions[static_cast<std::size_t>(k)] = z;
  }

  std::int64_t s = z;
  std::int64_t counter = 0;
  trace.companion[0] = s;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const std::int64_t time = offset + k - 1;
    const double u = stream.next_uniform();
    if (z != 0 && u >= erw_up_probability(p, time, z, Chain::Absolute) && u < 0.5) {
      trace.distance_events.push_back(k);
    }
    if (k <= counter_length && u >= counter_lower && u < 0.5) ++counter;
    z = step_abs_erw(z, time, u, p);
    s = step_reflected_srw(s, u);
    trace.erw.positions[static_cast<std::size_t>(offset + k)] = z;
    trace.companion[static_cast<std::size_t>(k)] = s;
  }
  trace.uniforms_consumed = stream.consumed() - start;
  out.distance = distance_process(trace);
  if (horizon >= counter_length) out.binomial_counter = counter;
  return out;
}

double asym_companion_up_probability(double p, std::int64_t a, std::int64_t barrier, double c) {
  return 0.5 + 2.0 * (2.0 * p - 1.0) * static_cast<double>(a) / (c * static_cast<double>(barrier));
}

bool asym_threshold_dominates(double p, std::int64_t a, std::int64_t barrier, double c) {
  const double up = asym_companion_up_probability(p, a, barrier, c);
  const auto first = static_cast<std::int64_t>(std::ceil(c * static_cast<double>(barrier * barrier)));
  // The threshold is increasing in i and decreasing in k, so the corner decides.
  const std::int64_t top = std::min(2 * a * barrier, first);
  return erw_up_probability(p, std::max<std::int64_t>(first, 1), top, Chain::Absolute) <= up;
}

AsymCoupling run_asym_coupling(double p, std::int64_t a, std::int64_t barrier, double c, UniformStream& stream,
                               std::int64_t activation_cap) {
  const WalkParams params(p);
  if (!(p > 0.5 && p < 0.75)) throw std::invalid_argument("asymmetric coupling requires 1/2 < p < 3/4");
  if (a < 1 || barrier < 1) throw std::invalid_argument("A and N must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
  const double excess = 2.0 * (2.0 * p - 1.0) * static_cast<double>(a) / (c * static_cast<double>(barrier));
  if (!(excess < 0.5)) throw std::invalid_argument("N too small: need 2(2p-1)A/(cN) < 1/2");

  const auto start = stream.consumed();
  const std::int64_t midpoint = a * barrier;
  const std::int64_t top = 2 * midpoint;
  const auto earliest = static_cast<std::int64_t>(std::ceil(c * static_cast<double>(barrier * barrier)));
  if (activation_cap <= 0) activation_cap = earliest + 10000 * barrier * barrier;

  AsymCoupling out;
  CoupledTrace& trace = out.trace;
  trace.erw = Trajectory{{0}, params, true};
  trace.mode = CouplingMode::Asymmetric;
  trace.companion_up_probability = 0.5 + excess;
  const AsymParams companion_params(trace.companion_up_probability);

  std::int64_t z = 0;
  std::int64_t time = 0;
  while (!(time >= earliest && z == midpoint)) {
    if (time >= activation_cap) {
      trace.uniforms_consumed = stream.consumed() - start;
      return out;
    }
    z = step_abs_erw(z, time, stream.next_uniform(), p);
    ++time;
    trace.erw.positions.push_back(z);
  }
  out.activated = true;
  out.activation_time = time;
  trace.shift_offset = time;

  std::int64_t y = midpoint;
  trace.companion.push_back(y);
  while (z > 0 && z < top) {
    const double u = stream.next_uniform();
    z = step_abs_erw(z, time, u, p);
    y = step_asym_srw(y, u, companion_params);
    ++time;
    ++out.coupled_steps;
    trace.erw.positions.push_back(z);
    trace.companion.push_back(y);
  }
  out.erw_returned_to_zero = z == 0;
  while (y > 0 && y < top) {
    y = step_asym_srw(y, stream.next_uniform(), companion_params);
    trace.companion.push_back(y);
  }
  out.companion_ruined = y == 0;
  trace.uniforms_consumed = stream.consumed() - start;
  return out;
}

std::optional<std::int64_t> first_order_violation(const CoupledTrace& trace, double p) {
  const auto& erw = trace.erw.positions;
  for (std::size_t k = 0; k < trace.companion.size(); ++k) {
    const std::int64_t z = erw[static_cast<std::size_t>(trace.shift_offset) + k];
    const std::int64_t s = trace.companion[k];
    if ((p >= 0.5 && z < s) || (p <= 0.5 && z > s)) return static_cast<std::int64_t>(k);
  }
  return std::nullopt;
}

std::optional<std::int64_t> first_distance_violation(const CoupledTrace& trace) {
  const auto distance = distance_process(trace);
  for (std::size_t k = 0; k < trace.companion.size(); ++k) {
    if (trace.erw.positions[k] > trace.companion[k] + distance.values[k]) return static_cast<std::int64_t>(k);
  }
  return std::nullopt;
}

std::optional<std::int64_t> first_shifted_violation(const ShiftedCoupling& coupling) {
  const auto& trace = coupling.trace;
  for (std::size_t k = 0; k < trace.companion.size(); ++k) {
    const std::int64_t z = trace.erw.positions[static_cast<std::size_t>(trace.shift_offset) + k];
    if (trace.companion[k] - coupling.distance.values[k] > z) return static_cast<std::int64_t>(k);
  }
  return std::nullopt;
}

std::optional<std::int64_t> first_asym_violation(const AsymCoupling& coupling) {
  if (!coupling.activated) return std::nullopt;
  const auto& trace = coupling.trace;
  for (std::int64_t k = 0; k <= coupling.coupled_steps; ++k) {
    const std::int64_t z = trace.erw.positions[static_cast<std::size_t>(trace.shift_offset + k)];
    if (z > trace.companion[static_cast<std::size_t>(k)]) return k;
  }
  return std::nullopt;
}

CouplingAudit audit_dominance(double p, std::int64_t horizon, std::int64_t replicates, const RunOptions& options) {
  require_replicates(replicates);
  std::vector<char> violated(static_cast<std::size_t>(replicates), 0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream(walk_key(options, r));
    const auto trace = run_dominance_coupling(p, horizon, stream);
    violated[static_cast<std::size_t>(r)] = first_order_violation(trace, p).has_value();
  });
  return summarize(violated, options);
}

ShiftedAudit audit_shifted(double p, std::int64_t barrier, std::int64_t d, std::int64_t replicates,
                           const RunOptions& options) {
  require_replicates(replicates);
  const std::int64_t horizon = 12 * barrier * barrier;
  std::vector<char> violated(static_cast<std::size_t>(replicates), 0);
  std::vector<double> counters(static_cast<std::size_t>(replicates), 0.0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream(walk_key(options, r));
    const auto coupling = run_shifted_coupling(p, barrier, d, horizon, stream);
    const auto idx = static_cast<std::size_t>(r);
    violated[idx] = first_shifted_violation(coupling).has_value() || first_order_violation(coupling.trace, p).has_value();
    counters[idx] = static_cast<double>(*coupling.binomial_counter);
  });

  ShiftedAudit out;
  out.audit = summarize(violated, options);
  const auto counter_moments = moments(counters);
  out.counter_mean = counter_moments.mean;
  out.counter_sigma = counter_moments.standard_error;
  out.counter_expected = 12.0 * (1.0 - 2.0 * p) * static_cast<double>(barrier) / static_cast<double>(d);
  std::vector<double> exceed(counters.size());
  std::transform(counters.begin(), counters.end(), exceed.begin(),
                 [&](double b) { return b > static_cast<double>(barrier) / 2.0 ? 1.0 : 0.0; });
  const auto exceed_moments = moments(exceed);
  out.exceed_half_fraction = exceed_moments.mean;
  out.exceed_half_sigma = exceed_moments.standard_error;
  return out;
}

AsymAudit audit_asym(double p, std::int64_t a, std::int64_t barrier, double c, std::int64_t replicates,
                     const RunOptions& options) {
  require_replicates(replicates);
  std::vector<char> violated(static_cast<std::size_t>(replicates), 0);
  std::vector<signed char> ruined(static_cast<std::size_t>(replicates), -1);
  std::vector<char> returned(static_cast<std::size_t>(replicates), 0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream(walk_key(options, r));
    const auto coupling = run_asym_coupling(p, a, barrier, c, stream);
    const auto idx = static_cast<std::size_t>(r);
    violated[idx] = first_asym_violation(coupling).has_value();
    if (coupling.activated) {
      ruined[idx] = coupling.companion_ruined ? 1 : 0;
      returned[idx] = coupling.erw_returned_to_zero;
    }
  });

  AsymAudit out;
  out.audit = summarize(violated, options);
  out.up_probability = asym_companion_up_probability(p, a, barrier, c);
  out.ruin_formula = asym_ruin_probability(a, barrier, out.up_probability);
  std::vector<double> ruin_values;
  double returns = 0.0;
  for (std::size_t r = 0; r < ruined.size(); ++r) {
    if (ruined[r] < 0) continue;
    ruin_values.push_back(ruined[r]);
    returns += returned[r];
  }
  out.activated = static_cast<std::int64_t>(ruin_values.size());
  const auto ruin_moments = moments(ruin_values);
  out.companion_ruin_fraction = ruin_moments.mean;
  out.companion_ruin_sigma = ruin_moments.standard_error;
  out.erw_return_fraction = out.activated > 0 ? returns / static_cast<double>(out.activated) : 0.0;
  return out;
}

AsymRuinEstimate mc_asym_ruin(std::int64_t a, std::int64_t barrier, double up_probability, std::int64_t replicates,
                              const RunOptions& options) {
  require_replicates(replicates);
  AsymRuinEstimate out;
  out.a = a;
  out.barrier = barrier;
  out.up_probability = up_probability;
  out.replicates = replicates;
  out.formula = asym_ruin_probability(a, barrier, up_probability);
  const AsymParams params(up_probability);
  const std::int64_t top = 2 * a * barrier;
  std::vector<double> ruined(static_cast<std::size_t>(replicates), 0.0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream(walk_key(options, r));
    std::int64_t y = a * barrier;
    while (y > 0 && y < top) y = step_asym_srw(y, stream.next_uniform(), params);
    ruined[static_cast<std::size_t>(r)] = y == 0 ? 1.0 : 0.0;
  });
  const auto m = moments(ruined);
  out.fraction = m.mean;
  out.sigma = m.standard_error;
  return out;
}

DistanceMoment measure_distance_moment(double p, std::int64_t k, std::int64_t replicates,
                                       const RunOptions& options) {
  if (!(p >= 0.5 && p < 0.75)) throw std::invalid_argument("distance moment requires 1/2 <= p < 3/4");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  require_replicates(replicates);
  std::vector<double> distances(static_cast<std::size_t>(replicates), 0.0);
  std::vector<char> violated(static_cast<std::size_t>(replicates), 0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    UniformStream stream(walk_key(options, r));
    const auto trace = run_dominance_coupling(p, k, stream);
    const auto idx = static_cast<std::size_t>(r);
    distances[idx] = 2.0 * static_cast<double>(trace.distance_events.size());
    violated[idx] = first_distance_violation(trace).has_value() || first_order_violation(trace, p).has_value();
  });

  DistanceMoment out;
  out.p = p;
  out.k = k;
  out.replicates = replicates;
  const auto m = moments(distances);
  out.mean = m.mean;
  out.sigma = m.standard_error;
  out.bound = 4.0 * (2.0 * p - 1.0) / std::sqrt(3.0 - 4.0 * p) * std::sqrt(static_cast<double>(k));
  const auto audit = summarize(violated, options);
  out.distance_violations = audit.violations;
  out.first_violation = audit.first_violation;
  return out;
}

}  // namespace erw
