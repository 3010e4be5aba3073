#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "alf/cli.hpp"

namespace alf::cli {
namespace {

struct Leaf {
  std::vector<std::string> path;  // keys from the root of the config
  std::string flag;               // e.g. "--blobs-n-train"
  const Json* slot;
};

std::string flag_name(const std::vector<std::string>& path) {
  std::string name = "--";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) name += '-';
    name += path[i];
  }
  std::replace(name.begin() + 2, name.end(), '_', '-');
  return name;
}

void collect_leaves(const Json& node, std::vector<std::string>& path, std::vector<Leaf>& out) {
  for (const auto& [key, value] : node.items()) {
    path.push_back(key);
    if (value.is_object()) {
      collect_leaves(value, path, out);
    } else {
      out.push_back({path, flag_name(path), &value});
    }
    path.pop_back();
  }
}

std::string dotted(const std::vector<std::string>& path) {
  std::string s;
  for (const auto& p : path) s += (s.empty() ? "" : ".") + p;
  return s;
}

Json scalar_from_text(const Json& slot, const std::string& text, const std::string& key) {
  try {
    if (slot.is_boolean()) {
      if (text == "true" || text == "1" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "no") return false;
      throw ConfigError(key, "expected true or false, got '" + text + "'");
    }
    if (slot.is_number_integer()) {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(key, "expected an integer, got '" + text + "'");
      }
      return v;
    }
    if (slot.is_number()) return parse_number(text);
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return text;
}

Json value_from_flag(const Leaf& leaf, const std::vector<std::string>& given) {
  const std::string key = dotted(leaf.path);
  const Json& slot = *leaf.slot;
  if (!slot.is_array()) return scalar_from_text(slot, given.back(), key);
  Json arr = Json::array();
  const Json element = slot.empty() ? Json("") : slot.front();
  for (const auto& occurrence : given) {
    if (element.is_string()) {
      arr.push_back(occurrence);
      continue;
    }
    std::size_t start = 0;
    while (start <= occurrence.size()) {
      const auto comma = std::min(occurrence.find(',', start), occurrence.size());
      arr.push_back(scalar_from_text(element, occurrence.substr(start, comma - start), key));
      start = comma + 1;
    }
  }
  return arr;
}

std::string describe(const Json& slot) {
  if (slot.is_string()) return "(default: \"" + slot.get<std::string>() + "\")";
  if (slot.is_array() && !slot.empty() && slot.front().is_string()) {
    return "(repeatable; default: " + slot.dump() + ")";
  }
  return "(default: " + slot.dump() + ")";
}

std::string usage() {
  std::string s = "usage: alf <subcommand> [options]\n\nsubcommands:\n";
  for (const auto& name : subcommands()) s += "  " + name + "\n";
  s += "\nRun 'alf <subcommand> --help' for the options of one subcommand.\n";
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return 1;
  }
  const std::string& sub = args.front();
  if (sub == "-h" || sub == "--help" || sub == "help") {
    out << usage();
    return 0;
  }
  if (sub == "--version") {
    out << "alf " << ALF_VERSION << "\n";
    return 0;
  }
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), sub) == subs.end()) {
    err << "unknown subcommand '" << sub << "'\n\n" << usage();
    return 1;
  }

  const Json defaults = default_config(sub);
  std::vector<Leaf> leaves;
  std::vector<std::string> path;
  collect_leaves(defaults, path, leaves);

  CLI::App app("alf " + sub, "alf " + sub);
  std::string config_path;
  std::string out_dir;
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--out-dir,--out", out_dir,
                 "Report directory (default: $ALF_OUT_DIR or the working directory)");
  std::map<std::string, std::vector<std::string>> given;
  std::vector<CLI::Option*> options;
  for (const auto& leaf : leaves) {
    auto* opt = app.add_option(leaf.flag, given[leaf.flag], describe(*leaf.slot));
    opt->expected(1);
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    options.push_back(opt);
  }

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "alf " << sub << ": " << e.what() << "\n";
    return 1;
  }

  try {
    Json config = config_path.empty() ? defaults : load_config(config_path, sub);
    Json overrides = Json::object();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (options[i]->count() == 0) continue;
      Json* node = &overrides;
      for (const auto& key : leaves[i].path) node = &(*node)[key];
      *node = value_from_flag(leaves[i], given[leaves[i].flag]);
    }
    config = merge_config(config, overrides);

    if (out_dir.empty()) {
      const char* env = std::getenv("ALF_OUT_DIR");
      out_dir = (env != nullptr && *env != '\0') ? env : ".";
    }
    const std::string started = utc_timestamp();
    const CommandResult result = run_command(sub, config);
    const auto written = write_report(out_dir, sub, config, result, started, utc_timestamp());
    out << result.summary;
    out << "wrote " << written.csv.string() << "\n";
    for (const auto& extra : written.extras) out << "wrote " << extra.string() << "\n";
    out << "wrote " << written.sidecar.string() << "\n";
    return 0;
  } catch (const InvalidInput& e) {
    err << "alf " << sub << ": " << e.what() << "\n";
    return 1;
  } catch (const FormatError& e) {
    err << "alf " << sub << ": " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    err << "alf " << sub << ": " << e.what() << "\n";
    return 1;
  } catch (const DegenerateLoss& e) {
    err << "alf " << sub << ": " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "alf " << sub << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "alf " << sub << ": run failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace alf::cli
