#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace erw::cli {

enum class Command { Exact, McEscape, Couple, Tailfit, Theta, Limit, UrnCheck, BoundsCheck };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view text);

/// Bad flags or parameters; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Command command = Command::Exact;
  std::vector<double> p{0.5};
  std::vector<std::int64_t> N{10};
  std::int64_t replicates = 10000;
  std::uint64_t seed = 0;
  std::int64_t tmax = 0;         // 0: command default
  std::int64_t horizon_cap = 0;  // 0: 10^4 N^2
  std::int64_t horizon = 10000;
  std::int64_t d = 13;
  std::vector<double> c;         // empty: command default
  std::int64_t A = 1;
  std::string mode = "dominance";
  double h = 1e-3;
  double T = 20.0;
  bool trace = false;

  // Execution only; never part of the hash or any report.
  unsigned threads = 1;
  std::string out = "runs";
};

/// Overwrites fields present in `json`. Unknown keys are a usage error.
void merge_json(ExperimentConfig& config, const nlohmann::json& json);

/// Fills command-dependent defaults and checks every precondition of the
/// targeted operations. Throws UsageError.
void finalize(ExperimentConfig& config);

/// Every field that influences results, with sorted keys.
nlohmann::json canonical_json(const ExperimentConfig& config);

/// FNV-1a 64 over the compact dump of canonical_json.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hash_hex(std::uint64_t hash);

}  // namespace erw::cli
