#include "erw_cli/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>

#include "erw/error.hpp"

namespace erw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

RunDirectory::RunDirectory(const fs::path& root, const std::string& name, std::uint64_t hash) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
  const std::string base = name + "-" + stamp + "-" + hash_hex(hash).substr(0, 8);
  fs::create_directories(root);
  for (int attempt = 0;; ++attempt) {
    auto candidate = root / (attempt == 0 ? base : base + "-" + std::to_string(attempt));
    if (fs::create_directory(candidate)) {
      path_ = std::move(candidate);
      return;
    }
  }
}

void RunDirectory::write(const std::string& file, const std::string& content) const {
  const auto target = path_ / file;
  if (fs::exists(target)) throw std::runtime_error("refusing to overwrite " + target.string());
  std::ofstream out(target, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("could not write " + target.string());
}

void RunDirectory::write_json(const std::string& file, const json& value) const {
  write(file, value.dump(2) + "\n");
}

namespace {

struct Flag {
  CLI::Option* option;
  std::function<void(ExperimentConfig&)> apply;
};

// Flags bound to one subcommand. Values land in `given` and are copied onto
// the effective config only when the flag appeared on the command line, so
// they override a config file without clobbering it with defaults.
struct FlagSet {
  ExperimentConfig given;
  std::string config_file;
  std::vector<Flag> flags;

  template <class T>
  void add(CLI::App* app, const std::string& name, T ExperimentConfig::*field, const std::string& help) {
    auto* option = app->add_option(name, given.*field, help);
    if constexpr (requires { (given.*field).begin(); } && !std::is_same_v<T, std::string>) option->delimiter(',');
    flags.push_back({option, [this, field](ExperimentConfig& c) { c.*field = given.*field; }});
  }

  void attach(CLI::App* app) {
    add(app, "--p", &ExperimentConfig::p, "memory parameter(s), comma separated");
    add(app, "--N", &ExperimentConfig::N, "barrier(s), comma separated");
    add(app, "--replicates", &ExperimentConfig::replicates, "Monte Carlo replicates");
    add(app, "--seed", &ExperimentConfig::seed, "master seed");
    add(app, "--threads", &ExperimentConfig::threads, "worker threads (results do not depend on it)");
    add(app, "--tmax", &ExperimentConfig::tmax, "last time on survival CSVs (0: command default)");
    add(app, "--horizon-cap", &ExperimentConfig::horizon_cap, "censoring cap per replicate (0: 10^4 N^2)");
    add(app, "--horizon", &ExperimentConfig::horizon, "steps for couple and urn-check");
    add(app, "--d", &ExperimentConfig::d, "shift constant d (shifted coupling)");
    add(app, "--c", &ExperimentConfig::c, "constant(s) c (asymmetric coupling, bounds-check)");
    add(app, "--A", &ExperimentConfig::A, "constant A (asymmetric coupling)");
    add(app, "--mode", &ExperimentConfig::mode, "coupling: dominance, shifted or asymmetric");
    add(app, "--h", &ExperimentConfig::h, "limit-process grid step");
    add(app, "--T", &ExperimentConfig::T, "limit-process horizon");
    add(app, "--out", &ExperimentConfig::out, "root directory for run directories");
    auto* trace = app->add_flag("--trace", given.trace, "also dump replicate 0 as a trace CSV");
    flags.push_back({trace, [this](ExperimentConfig& c) { c.trace = given.trace; }});
    app->add_option("--config", config_file, "JSON config file; flags override it")->check(CLI::ExistingFile);
  }

  ExperimentConfig resolve(std::optional<Command> command) const {
    ExperimentConfig config;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      json parsed;
      try {
        parsed = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError("cannot parse " + config_file + ": " + e.what());
      }
      // Run directories store the hash next to the config; it is not a setting.
      parsed.erase("config_hash");
      merge_json(config, parsed);
    }
    if (command) config.command = *command;
    for (const auto& flag : flags) {
      if (flag.option->count() > 0) flag.apply(config);
    }
    return config;
  }
};

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

int fail(std::ostream& err, int code, json error) {
  error["exit_code"] = code;
  err << error.dump() << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Escape times of the elephant random walk: exact curves, simulation and couplings", "erw"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h would clash with the grid step --h

  struct Sub {
    CLI::App* app;
    std::optional<Command> command;
  };
  std::vector<std::unique_ptr<FlagSet>> sets;
  std::vector<Sub> subs;
  const std::pair<const char*, const char*> descriptions[] = {
      {"exact", "exact survival curves and expected escape times"},
      {"mc-escape", "Monte Carlo escape times and survival curves"},
      {"couple", "audit a pathwise coupling"},
      {"tailfit", "fit the exponential tail of the survival function"},
      {"theta", "normalized mean escape times over a grid of N"},
      {"limit", "mean hitting time of +-1 by the Gaussian limit process"},
      {"urn-check", "KS comparison of the three walk representations"},
      {"bounds-check", "simple-walk Markov and Kolmogorov bounds"},
  };
  for (const auto& [name, help] : descriptions) {
    auto* sub = app.add_subcommand(name, help);
    sets.push_back(std::make_unique<FlagSet>());
    sets.back()->attach(sub);
    subs.push_back({sub, parse_command(name)});
  }

  auto* replay_app = app.add_subcommand("replay", "re-run one replicate and dump its trace");
  sets.push_back(std::make_unique<FlagSet>());
  sets.back()->attach(replay_app);
  std::uint64_t replicate = 0;
  std::string expected_hash;
  std::string experiment;
  replay_app->add_option("--replicate", replicate, "replicate index from the stream key")->required();
  replay_app->add_option("--config-hash", expected_hash, "hash of the original run's config")->required();
  replay_app->add_option("--experiment", experiment, "command being replayed (default: from --config)");
  subs.push_back({replay_app, std::nullopt});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (e.get_name() == "CallForVersion" ? "" : app.help());
      return kExitSuccess;
    }
    return fail(err, kExitUsage, error_json("usage", e.what()));
  }

  std::size_t chosen = 0;
  while (!subs[chosen].app->parsed()) ++chosen;
  const bool replaying = !subs[chosen].command.has_value();

  ExperimentConfig config;
  std::uint64_t hash = 0;
  std::optional<RunDirectory> dir;
  try {
    std::optional<Command> command = subs[chosen].command;
    if (replaying && !experiment.empty()) {
      command = parse_command(experiment);
      if (!command) throw UsageError("unknown --experiment '" + experiment + "'");
    }
    config = sets[chosen]->resolve(command);
    finalize(config);
    hash = config_hash(config);
    if (replaying && hash_hex(hash) != expected_hash) {
      throw UsageError("config hash " + hash_hex(hash) + " does not match " + expected_hash +
                       "; the replay config differs from the original run");
    }

    dir.emplace(config.out, replaying ? "replay" : std::string(to_string(config.command)), hash);
    auto stored = canonical_json(config);
    stored["config_hash"] = hash_hex(hash);
    dir->write_json("config.json", stored);
    if (replaying) {
      replay(config, replicate, *dir);
    } else {
      execute(config, *dir);
    }
    out << dir->path().string() << '\n';
    return kExitSuccess;
  } catch (const UsageError& e) {
    return fail(err, kExitUsage, error_json("usage", e.what()));
  } catch (const std::invalid_argument& e) {
    return fail(err, kExitUsage, error_json("usage", e.what()));
  } catch (const BudgetExceeded& e) {
    auto error = error_json("budget_exceeded", e.what());
    error["config_hash"] = hash_hex(hash);
    return fail(err, kExitUsage, error);
  } catch (const InvariantViolation& e) {
    auto error = error_json("invariant_violation", e.what());
    error["config_hash"] = hash_hex(hash);
    if (e.key()) {
      error["stream_key"] = stream_key_json(*e.key());
      if (dir) {
        error["replay"] = "erw replay --config " + (dir->path() / "config.json").string() + " --replicate " +
                          std::to_string(e.key()->replicate_index) + " --config-hash " + hash_hex(hash);
      }
    }
    if (dir) {
      dir->write_json("error.json", error);
      out << dir->path().string() << '\n';
    }
    return fail(err, kExitInvariant, error);
  }
}

}  // namespace erw::cli
