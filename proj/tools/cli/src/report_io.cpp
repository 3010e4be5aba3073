#include <ctime>

#include "alf/cli.hpp"

namespace alf::cli {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

WrittenReport write_report(const std::filesystem::path& out_dir, std::string_view subcommand,
                           const Json& config, const CommandResult& result,
                           const std::string& started, const std::string& finished) {
  const std::string stem = std::string(subcommand) + "-" + config_hash(config);
  WrittenReport written;
  written.csv = out_dir / (stem + ".csv");
  written.sidecar = out_dir / (stem + ".json");
  write_file_atomic(written.csv, result.csv);
  Json outputs = Json::array({written.csv.filename().string()});
  for (const auto& [suffix, content] : result.extra_csv) {
    written.extras.push_back(out_dir / (stem + "-" + suffix + ".csv"));
    write_file_atomic(written.extras.back(), content);
    outputs.push_back(written.extras.back().filename().string());
  }
  const Json sidecar{{"tool", "alf"},
                     {"version", ALF_VERSION},
                     {"subcommand", subcommand},
                     {"config", config},
                     {"config_hash", config_hash(config)},
                     {"started_utc", started},
                     {"finished_utc", finished},
                     {"outputs", outputs},
                     {"results", result.results}};
  write_file_atomic(written.sidecar, sidecar.dump(2) + "\n");
  return written;
}

}  // namespace alf::cli
