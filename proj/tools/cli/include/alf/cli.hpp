#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alf/csv.hpp"
#include "alf/errors.hpp"
#include "json.hpp"

namespace alf::cli {

using Json = nlohmann::json;

/// Config rejected: unknown key or wrong type. key_path() names the offender,
/// e.g. "blobs.k".
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& key_path, const std::string& what)
      : InvalidInput("config key '" + key_path + "': " + what), key_path_(key_path) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

const std::vector<std::string>& subcommands();

/// Every option of a subcommand with its default value. Throws InvalidInput for
/// an unknown subcommand.
Json default_config(std::string_view subcommand);

/// Copy of base with override's values applied. Keys must already exist in
/// base and values must have the same JSON type (integers also satisfy
/// floating-point slots); objects merge recursively.
Json merge_config(const Json& base, const Json& override_values, const std::string& prefix = "");

/// Defaults for the subcommand overlaid with the JSON object in path.
Json load_config(const std::filesystem::path& path, std::string_view subcommand);

/// 16 hex digits of FNV-1a over the canonical dump of a resolved config.
std::string config_hash(const Json& resolved);

struct CommandResult {
  std::string csv;
  std::vector<std::pair<std::string, std::string>> extra_csv;  // file suffix, content
  Json results = Json::object();
  std::string summary;  // human-readable lines for stdout
};

/// Runs one subcommand on a resolved config.
CommandResult run_command(std::string_view subcommand, const Json& config);

struct WrittenReport {
  std::filesystem::path csv;
  std::filesystem::path sidecar;
  std::vector<std::filesystem::path> extras;
};

/// Writes <subcommand>-<hash>.csv, any extras as <subcommand>-<hash>-<suffix>.csv
/// and a JSON sidecar with the resolved config and run metadata.
WrittenReport write_report(const std::filesystem::path& out_dir, std::string_view subcommand,
                           const Json& config, const CommandResult& result,
                           const std::string& started, const std::string& finished);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// args excludes the program name. Returns 0 on success, 1 for invalid usage,
/// config or input, 2 when a run fails.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alf::cli
