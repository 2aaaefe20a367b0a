#include "erw_cli/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "erw/couplings.hpp"
#include "erw/limit_process.hpp"

namespace erw::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommandNames{{
    {Command::Exact, "exact"},
    {Command::McEscape, "mc-escape"},
    {Command::Couple, "couple"},
    {Command::Tailfit, "tailfit"},
    {Command::Theta, "theta"},
    {Command::Limit, "limit"},
    {Command::UrnCheck, "urn-check"},
    {Command::BoundsCheck, "bounds-check"},
}};

template <class T>
std::vector<T> as_list(const nlohmann::json& value) {
  if (value.is_array()) return value.get<std::vector<T>>();
  return {value.get<T>()};
}

void require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommandNames) {
    if (c == command) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
  for (const auto& [c, name] : kCommandNames) {
    if (name == text) return c;
  }
  return std::nullopt;
}

void merge_json(ExperimentConfig& config, const nlohmann::json& json) {
  if (!json.is_object()) throw UsageError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : json.items()) {
      if (key == "command") {
        const auto command = parse_command(value.get<std::string>());
        require(command.has_value(), "unknown command '" + value.get<std::string>() + "' in config");
        config.command = *command;
      } else if (key == "p") {
        config.p = as_list<double>(value);
      } else if (key == "N") {
        config.N = as_list<std::int64_t>(value);
      } else if (key == "replicates") {
        config.replicates = value.get<std::int64_t>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "threads") {
        config.threads = value.get<unsigned>();
      } else if (key == "tmax") {
        config.tmax = value.get<std::int64_t>();
      } else if (key == "horizon_cap") {
        config.horizon_cap = value.get<std::int64_t>();
      } else if (key == "horizon") {
        config.horizon = value.get<std::int64_t>();
      } else if (key == "d") {
        config.d = value.get<std::int64_t>();
      } else if (key == "c") {
        config.c = as_list<double>(value);
      } else if (key == "A") {
        config.A = value.get<std::int64_t>();
      } else if (key == "mode") {
        config.mode = value.get<std::string>();
      } else if (key == "h") {
        config.h = value.get<double>();
      } else if (key == "T") {
        config.T = value.get<double>();
      } else if (key == "trace") {
        config.trace = value.get<bool>();
      } else if (key == "out") {
        config.out = value.get<std::string>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad value in config: ") + e.what());
  }
}

void finalize(ExperimentConfig& config) {
  require(!config.p.empty(), "--p needs at least one value");
  require(!config.N.empty(), "--N needs at least one value");
  for (const double p : config.p) require(p > 0.0 && p < 1.0, "every p must lie in (0,1)");
  for (const auto n : config.N) require(n >= 2, "every N must be >= 2");
  require(config.replicates >= 1, "--replicates must be >= 1");
  require(config.threads >= 1, "--threads must be >= 1");
  require(config.tmax >= 0, "--tmax must be >= 0");
  require(config.horizon_cap >= 0, "--horizon-cap must be >= 0");

  if (config.c.empty()) {
    config.c = config.command == Command::BoundsCheck ? std::vector<double>{0.5, 3.0} : std::vector<double>{1.0};
  }
  for (const double c : config.c) require(c > 0.0 && std::isfinite(c), "every c must be positive");

  auto below = [&](double limit, const char* what) {
    for (const double p : config.p) require(p < limit, what);
  };
  switch (config.command) {
    case Command::Exact:
    case Command::McEscape:
    case Command::Tailfit:
      break;
    case Command::Theta:
      below(0.75, "theta needs p < 3/4");
      for (std::size_t i = 1; i < config.N.size(); ++i) require(config.N[i] > config.N[i - 1], "--N must ascend");
      break;
    case Command::Limit:
      below(0.75, "limit needs p < 3/4");
      require(config.h > 0.0 && config.h < config.T, "limit needs 0 < h < T");
      require(config.T / config.h <= static_cast<double>(kMaxGridPoints), "limit grid T/h is too large");
      break;
    case Command::UrnCheck:
      require(config.horizon >= 1, "--horizon must be >= 1");
      break;
    case Command::BoundsCheck:
      require(config.N.size() == 1, "bounds-check takes a single N");
      break;
    case Command::Couple: {
      const auto mode = parse_coupling_mode(config.mode);
      require(mode.has_value(), "--mode must be dominance, shifted or asymmetric");
      require(config.horizon >= 1, "--horizon must be >= 1");
      if (*mode == CouplingMode::Shifted) {
        below(0.5, "shifted coupling needs p < 1/2");
        require(config.d >= 1, "--d must be >= 1");
        require(config.N.size() == 1, "shifted coupling takes a single N");
      }
      if (*mode == CouplingMode::Asymmetric) {
        require(config.N.size() == 1 && config.c.size() == 1, "asymmetric coupling takes a single N and c");
        require(config.A >= 1, "--A must be >= 1");
        for (const double p : config.p) {
          require(p > 0.5 && p < 0.75, "asymmetric coupling needs 1/2 < p < 3/4");
          const double excess = 2.0 * (2.0 * p - 1.0) * static_cast<double>(config.A) /
                                (config.c.front() * static_cast<double>(config.N.front()));
          require(excess < 0.5, "asymmetric coupling needs 2(2p-1)A/(cN) < 1/2; raise N or c");
        }
      }
      break;
    }
  }
}

nlohmann::json canonical_json(const ExperimentConfig& config) {
  // nlohmann::json objects keep keys sorted, so the dump is canonical.
  nlohmann::json out;
  out["command"] = std::string(to_string(config.command));
  out["p"] = config.p;
  out["N"] = config.N;
  out["replicates"] = config.replicates;
  out["seed"] = config.seed;
  out["tmax"] = config.tmax;
  out["horizon_cap"] = config.horizon_cap;
  out["horizon"] = config.horizon;
  out["d"] = config.d;
  out["c"] = config.c;
  out["A"] = config.A;
  out["mode"] = config.mode;
  out["h"] = config.h;
  out["T"] = config.T;
  out["trace"] = config.trace;
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const unsigned char byte : canonical_json(config).dump()) {
    hash ^= byte;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string hash_hex(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace erw::cli
