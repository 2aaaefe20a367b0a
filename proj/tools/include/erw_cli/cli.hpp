#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "erw/rng.hpp"
#include "erw_cli/config.hpp"

namespace erw::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;

/// Parses `args` (without the program name), runs the command and returns the
/// exit code. On success the run directory path is printed to `out`; on
/// failure an error JSON object is printed to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// A fresh directory `<root>/<name>-<UTC timestamp>-<hash8>[-k]`. Files are
/// created once and never rewritten.
class RunDirectory {
 public:
  RunDirectory(const std::filesystem::path& root, const std::string& name, std::uint64_t hash);

  const std::filesystem::path& path() const noexcept { return path_; }
  void write(const std::string& file, const std::string& content) const;
  void write_json(const std::string& file, const nlohmann::json& json) const;

 private:
  std::filesystem::path path_;
};

nlohmann::json stream_key_json(const StreamKey& key);

/// Runs an experiment into `dir`. Throws UsageError, erw::InvariantViolation
/// or erw::BudgetExceeded.
void execute(const ExperimentConfig& config, const RunDirectory& dir);

/// Re-runs replicate `replicate_index` of `config` and writes its trace CSVs.
void replay(const ExperimentConfig& config, std::uint64_t replicate_index, const RunDirectory& dir);

}  // namespace erw::cli
