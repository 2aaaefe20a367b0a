#include <cmath>
#include <fstream>
#include <sstream>

#include "erw/couplings.hpp"
#include "erw/error.hpp"
#include "erw/estimators.hpp"
#include "erw/exact.hpp"
#include "erw/limit_process.hpp"
#include "erw_cli/cli.hpp"

namespace erw::cli {

namespace {

using nlohmann::json;

constexpr unsigned kBlockShift = 40;
constexpr std::uint64_t kLocalMask = (std::uint64_t{1} << kBlockShift) - 1;

std::string label(double p) { return "p" + format_double(p); }
std::string label(double p, std::int64_t n) { return label(p) + "_N" + std::to_string(n); }

json report_skeleton(const ExperimentConfig& config) {
  return {{"params", canonical_json(config)},
          {"summaries", json::array()},
          {"fits", json::array()},
          {"bound_checks", json::array()}};
}

std::string curve_csv(const SurvivalCurve& curve) {
  std::ostringstream out;
  write_csv(out, curve);
  return out.str();
}

std::string coupled_csv(const CoupledTrace& trace) {
  const auto distance = distance_process(trace);
  std::ostringstream out;
  out << "k,erw,companion,distance\n";
  for (std::size_t k = 0; k < trace.companion.size(); ++k) {
    const auto erw_index = static_cast<std::size_t>(trace.shift_offset) + k;
    out << k << ',' << trace.erw.positions[erw_index] << ',' << trace.companion[k] << ',' << distance.values[k]
        << '\n';
  }
  return out.str();
}

std::string walk_csv(const std::string& column, const std::vector<std::int64_t>& positions) {
  std::ostringstream out;
  out << "k," << column << '\n';
  for (std::size_t k = 0; k < positions.size(); ++k) out << k << ',' << positions[k] << '\n';
  return out.str();
}

RunOptions options_of(const ExperimentConfig& config) { return {config.seed, config.threads}; }

std::int64_t cap_for(const ExperimentConfig& config, std::int64_t n) {
  return config.horizon_cap > 0 ? config.horizon_cap : 10000 * n * n;
}

void raise_if_violated(std::int64_t violations, const std::optional<StreamKey>& key, const std::string& what) {
  if (violations > 0) {
    throw InvariantViolation(what + ": " + std::to_string(violations) + " replicate(s) violate the coupling", key);
  }
}

// -- experiments -------------------------------------------------------------

void run_exact(const ExperimentConfig& config, const RunDirectory& dir) {
  json records = json::array();
  for (const double p : config.p) {
    for (const auto n : config.N) {
      const auto expected = exact_expected_escape(n, p, 1e-12, config.horizon_cap);
      records.push_back({{"N", n}, {"p", p}, {"expectation", expected.expectation},
                         {"truncation_bound", expected.truncation_bound}});
      const std::int64_t tmax = config.tmax > 0 ? config.tmax : 20 * n * n;
      dir.write("survival_" + label(p, n) + ".csv", curve_csv(exact_survival(n, p, tmax)));
    }
  }
  dir.write_json("exact.json", {{"params", canonical_json(config)}, {"records", records}});
}

void run_mc_escape(const ExperimentConfig& config, const RunDirectory& dir) {
  auto report = report_skeleton(config);
  const auto options = options_of(config);
  std::uint64_t block = 0;
  for (const double p : config.p) {
    for (const auto n : config.N) {
      const std::int64_t cap = cap_for(config, n);
      const auto summary = mc_escape_times(p, n, config.replicates, options, cap, static_cast<std::size_t>(-1),
                                           block << kBlockShift);
      const auto& q = summary.quantiles;
      report["summaries"].push_back({{"p", p},
                                     {"N", n},
                                     {"replicate_block", block},
                                     {"replicates", summary.replicates},
                                     {"censored", summary.censored},
                                     {"horizon_cap", cap},
                                     {"mean", summary.mean},
                                     {"variance", summary.variance},
                                     {"mean_ci99", summary.mean_ci_halfwidth},
                                     {"normalized_mean", summary.mean / static_cast<double>(n * n)},
                                     {"q50", q.q50},
                                     {"q90", q.q90},
                                     {"q99", q.q99}});
      const std::int64_t tmax = std::min(cap, config.tmax > 0 ? config.tmax : 8 * n * n);
      std::vector<std::int64_t> grid(static_cast<std::size_t>(tmax) + 1);
      for (std::int64_t t = 0; t <= tmax; ++t) grid[static_cast<std::size_t>(t)] = t;
      dir.write("survival_" + label(p, n) + ".csv", curve_csv(mc_survival_curve(*summary.escape_times, n, p, cap, grid)));
      ++block;
    }
  }
  dir.write_json("report.json", report);
}

void run_tailfit(const ExperimentConfig& config, const RunDirectory& dir) {
  auto report = report_skeleton(config);
  for (const double p : config.p) {
    for (const auto n : config.N) {
      const auto fit = fit_tail_auto(p, n, config.replicates, options_of(config));
      report["fits"].push_back({{"p", p},
                                {"N", n},
                                {"source", std::string(to_string(fit.source))},
                                {"t_lo", fit.t_lo},
                                {"t_hi", fit.t_hi},
                                {"points", fit.points},
                                {"slope", fit.slope},
                                {"intercept", fit.intercept},
                                {"r_squared", fit.r_squared},
                                {"slope_times_N2", fit.slope * static_cast<double>(n * n)}});
    }
  }
  dir.write_json("report.json", report);
}

void run_theta(const ExperimentConfig& config, const RunDirectory& dir) {
  auto report = report_skeleton(config);
  for (const double p : config.p) {
    const auto estimate = estimate_theta(p, config.N, config.replicates, options_of(config));
    json entries = json::array();
    for (const auto& e : estimate.entries) {
      entries.push_back({{"N", e.barrier},
                         {"normalized_mean", e.normalized_mean},
                         {"sigma", e.sigma},
                         {"ci99", e.ci},
                         {"censored", e.censored}});
    }
    report["summaries"].push_back({{"p", p}, {"theta", estimate.theta}, {"entries", entries}});
  }
  dir.write_json("report.json", report);
}

void run_limit(const ExperimentConfig& config, const RunDirectory& dir) {
  for (const double p : config.p) {
    const auto e = estimate_theta_limit(p, config.h, config.T, config.replicates, options_of(config));
    dir.write_json("limit_" + label(p) + ".json", {{"p", e.p},
                                                    {"h", e.step},
                                                    {"T", e.horizon},
                                                    {"replicates", e.replicates},
                                                    {"theta_hat", e.theta_hat},
                                                    {"sigma", e.sigma},
                                                    {"ci", e.ci},
                                                    {"censored_fraction", e.censored_fraction}});
  }
}

void run_urn_check(const ExperimentConfig& config, const RunDirectory& dir) {
  auto report = report_skeleton(config);
  for (const double p : config.p) {
    const auto check = check_representations(p, config.horizon, config.replicates, options_of(config));
    json pairs = json::array();
    for (const auto& pair : check.pairs) {
      pairs.push_back({{"first", std::string(to_string(pair.first))},
                       {"second", std::string(to_string(pair.second))},
                       {"statistic", pair.statistic},
                       {"critical", pair.critical},
                       {"passed", pair.passed}});
    }
    report["summaries"].push_back(
        {{"p", p}, {"horizon", check.horizon}, {"alpha", check.alpha}, {"pairs", pairs}});
  }
  dir.write_json("report.json", report);
}

void run_bounds_check(const ExperimentConfig& config, const RunDirectory& dir) {
  auto report = report_skeleton(config);
  const auto n = config.N.front();
  for (const auto& check : verify_markov_kolmogorov_bounds(n, config.c, config.replicates, options_of(config))) {
    report["bound_checks"].push_back({{"N", n},
                                      {"c", check.c},
                                      {"kind", std::string(to_string(check.kind))},
                                      {"threshold_time", check.threshold_time},
                                      {"empirical", check.empirical},
                                      {"sigma", check.sigma},
                                      {"bound", check.bound},
                                      {"passed", check.passed}});
  }
  dir.write_json("report.json", report);
}

void run_couple(const ExperimentConfig& config, const RunDirectory& dir) {
  auto report = report_skeleton(config);
  const auto options = options_of(config);
  const auto mode = *parse_coupling_mode(config.mode);
  std::int64_t violations = 0;
  std::optional<StreamKey> first;
  std::string where;
  auto note = [&](std::int64_t count, const std::optional<StreamKey>& key, double p) {
    if (count > 0 && violations == 0) {
      first = key;
      where = std::string(to_string(mode)) + " coupling at p=" + format_double(p);
    }
    violations += count;
  };

  for (const double p : config.p) {
    const StreamKey trace_key{config.seed, 0, Purpose::WalkDriver};
    json summary{{"p", p}, {"mode", config.mode}, {"replicates", config.replicates}};
    switch (mode) {
      case CouplingMode::Dominance: {
        summary["horizon"] = config.horizon;
        if (p >= 0.5 && p < 0.75) {
          const auto m = measure_distance_moment(p, config.horizon, config.replicates, options);
          summary["violations"] = m.distance_violations;
          summary["distance_mean"] = m.mean;
          summary["distance_sigma"] = m.sigma;
          summary["distance_bound"] = m.bound;
          summary["distance_within_bound"] = m.mean <= m.bound + 3.0 * m.sigma;
          note(m.distance_violations, m.first_violation, p);
        } else {
          const auto audit = audit_dominance(p, config.horizon, config.replicates, options);
          summary["violations"] = audit.violations;
          note(audit.violations, audit.first_violation, p);
        }
        if (config.trace) {
          UniformStream stream(trace_key);
          dir.write("trace_" + label(p) + ".csv", coupled_csv(run_dominance_coupling(p, config.horizon, stream)));
        }
        break;
      }
      case CouplingMode::Shifted: {
        const auto n = config.N.front();
        const auto audit = audit_shifted(p, n, config.d, config.replicates, options);
        summary.update({{"N", n},
                        {"d", config.d},
                        {"violations", audit.audit.violations},
                        {"counter_mean", audit.counter_mean},
                        {"counter_sigma", audit.counter_sigma},
                        {"counter_expected", audit.counter_expected},
                        {"exceed_half_fraction", audit.exceed_half_fraction},
                        {"exceed_half_sigma", audit.exceed_half_sigma}});
        note(audit.audit.violations, audit.audit.first_violation, p);
        if (config.trace) {
          UniformStream stream(trace_key);
          const auto c = run_shifted_coupling(p, n, config.d, 12 * n * n, stream);
          dir.write("trace_" + label(p) + ".csv", coupled_csv(c.trace));
        }
        break;
      }
      case CouplingMode::Asymmetric: {
        const auto n = config.N.front();
        const double c = config.c.front();
        const auto audit = audit_asym(p, config.A, n, c, config.replicates, options);
        summary.update({{"N", n},
                        {"A", config.A},
                        {"c", c},
                        {"violations", audit.audit.violations},
                        {"activated", audit.activated},
                        {"up_probability", audit.up_probability},
                        {"companion_ruin_fraction", audit.companion_ruin_fraction},
                        {"companion_ruin_sigma", audit.companion_ruin_sigma},
                        {"ruin_formula", audit.ruin_formula},
                        {"erw_return_fraction", audit.erw_return_fraction}});
        note(audit.audit.violations, audit.audit.first_violation, p);
        if (config.trace) {
          UniformStream stream(trace_key);
          dir.write("trace_" + label(p) + ".csv", coupled_csv(run_asym_coupling(p, config.A, n, c, stream).trace));
        }
        break;
      }
    }
    report["summaries"].push_back(summary);
  }
  dir.write_json("report.json", report);
  raise_if_violated(violations, first, where);
}

// -- replay ------------------------------------------------------------------

std::vector<std::int64_t> escape_path(double p, std::int64_t n, std::int64_t cap, UniformStream& stream) {
  std::vector<std::int64_t> path{0};
  std::int64_t state = 0;
  for (std::int64_t k = 1; k <= cap && state < n; ++k) {
    state = step_abs_erw(state, k - 1, stream.next_uniform(), p);
    path.push_back(state);
  }
  return path;
}

}  // namespace

json stream_key_json(const StreamKey& key) {
  return {{"master_seed", key.master_seed},
          {"replicate_index", key.replicate_index},
          {"purpose", std::string(to_string(key.purpose))}};
}

void execute(const ExperimentConfig& config, const RunDirectory& dir) {
  switch (config.command) {
    case Command::Exact: return run_exact(config, dir);
    case Command::McEscape: return run_mc_escape(config, dir);
    case Command::Couple: return run_couple(config, dir);
    case Command::Tailfit: return run_tailfit(config, dir);
    case Command::Theta: return run_theta(config, dir);
    case Command::Limit: return run_limit(config, dir);
    case Command::UrnCheck: return run_urn_check(config, dir);
    case Command::BoundsCheck: return run_bounds_check(config, dir);
  }
}

void replay(const ExperimentConfig& config, std::uint64_t replicate_index, const RunDirectory& dir) {
  const std::uint64_t block = replicate_index >> kBlockShift;
  const std::uint64_t local = replicate_index & kLocalMask;
  if (local >= static_cast<std::uint64_t>(config.replicates)) {
    throw UsageError("replicate " + std::to_string(local) + " is outside the configured " +
                     std::to_string(config.replicates) + " replicates");
  }
  auto require_block = [&](std::uint64_t blocks) {
    if (block >= blocks) throw UsageError("replicate index names a block this experiment does not have");
  };
  const StreamKey walk_key{config.seed, replicate_index, Purpose::WalkDriver};

  switch (config.command) {
    case Command::Exact:
      throw UsageError("exact has no replicates to replay");
    case Command::Couple: {
      require_block(1);
      const auto mode = *parse_coupling_mode(config.mode);
      for (const double p : config.p) {
        UniformStream stream(walk_key);
        CoupledTrace trace;
        const auto n = config.N.front();
        if (mode == CouplingMode::Dominance) trace = run_dominance_coupling(p, config.horizon, stream);
        if (mode == CouplingMode::Shifted) trace = run_shifted_coupling(p, n, config.d, 12 * n * n, stream).trace;
        if (mode == CouplingMode::Asymmetric) trace = run_asym_coupling(p, config.A, n, config.c.front(), stream).trace;
        dir.write("trace_" + label(p) + ".csv", coupled_csv(trace));
      }
      return;
    }
    case Command::McEscape: {
      require_block(config.p.size() * config.N.size());
      const double p = config.p[block / config.N.size()];
      const auto n = config.N[block % config.N.size()];
      UniformStream stream(walk_key);
      dir.write("trace_" + label(p, n) + ".csv", walk_csv("erw", escape_path(p, n, cap_for(config, n), stream)));
      return;
    }
    case Command::Theta: {
      require_block(config.N.size());
      const auto n = config.N[block];
      for (const double p : config.p) {
        UniformStream stream(walk_key);
        dir.write("trace_" + label(p, n) + ".csv", walk_csv("erw", escape_path(p, n, cap_for(config, n), stream)));
      }
      return;
    }
    case Command::Tailfit: {
      require_block(1);
      for (const double p : config.p) {
        for (const auto n : config.N) {
          if (n <= 30) continue;  // fitted on the exact curve, no replicates
          UniformStream stream(walk_key);
          dir.write("trace_" + label(p, n) + ".csv", walk_csv("erw", escape_path(p, n, 10000 * n * n, stream)));
        }
      }
      return;
    }
    case Command::Limit: {
      require_block(1);
      for (const double p : config.p) {
        const auto grid = build_covariance(p, config.T, config.h);
        UniformStream stream({config.seed, replicate_index, Purpose::LimitProcess});
        const auto sample = sample_hitting_time(grid, stream);
        std::ostringstream out;
        out << "k,t,w\n";
        for (std::size_t i = 0; i < sample.path.size(); ++i) {
          out << i << ',' << format_double(grid.time(i)) << ',' << format_double(sample.path[i]) << '\n';
        }
        dir.write("trace_" + label(p) + ".csv", out.str());
      }
      return;
    }
    case Command::UrnCheck: {
      constexpr Representation kinds[] = {Representation::Kernel, Representation::Memory, Representation::Urn};
      require_block(3);
      for (const double p : config.p) {
        UniformStream stream(walk_key);
        const auto walk = simulate(WalkParams(p, kinds[block]), config.horizon, stream);
        dir.write("trace_" + label(p) + ".csv", walk_csv(std::string(to_string(kinds[block])), walk.positions));
      }
      return;
    }
    case Command::BoundsCheck: {
      require_block(1);
      const auto n = config.N.front();
      double longest = 0.0;
      for (const double c : config.c) longest = std::max(longest, std::floor(c * static_cast<double>(n * n)));
      UniformStream stream(walk_key);
      std::vector<std::int64_t> path{0};
      for (std::int64_t k = 1; k <= static_cast<std::int64_t>(longest) + 1 && path.back() < n; ++k) {
        path.push_back(step_reflected_srw(path.back(), stream.next_uniform()));
      }
      dir.write("trace_N" + std::to_string(n) + ".csv", walk_csv("srw", path));
      return;
    }
  }
}

}  // namespace erw::cli
