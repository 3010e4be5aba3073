#include <cstdint>
#include <cstdio>

#include "alf/cli.hpp"

namespace alf::cli {
namespace {

Json defaults_for(std::string_view sub) {
  if (sub == "losses") {
    return {{"loss", Json::array({"ce", "fl", "mae", "rce", "gce", "sce", "nce", "nfl", "ngce", "agce",
                                  "aul", "ael", "apl(nce,agce)"})},
            {"probs", Json::array({0.7, 0.2, 0.1})},
            {"label", 0}};
  }
  if (sub == "asym") {
    return {{"loss", Json::array({"agce(a=1,q=2)"})},
            {"weights", Json::array({0.6, 0.2, 0.2})},
            {"noise", ""},
            {"k", 10},
            {"grid_step", 0.01},
            {"brute", false}};
  }
  if (sub == "calib") {
    return {{"loss", "agce(a=1,q=2)"}, {"eta_grid", "0.05:0.95:0.05"}, {"alpha_step", 0.001}};
  }
  if (sub == "bound") {
    return {{"loss", Json::array({"agce(a=1,q=2)", "mae"})},
            {"instances", 1000},
            {"max_points", 20},
            {"alpha_step", 0.001},
            {"seed", 0}};
  }
  if (sub == "noise") {
    return {{"noise", ""},      {"kind", "symmetric"}, {"eta", 0.4}, {"k", 10},
            {"group_size", 5}, {"flips", ""},          {"dump", ""}};
  }
  if (sub == "fig2") {
    return {{"family", "ael"}, {"params", ""}, {"param", "a"}, {"grid", "0.2:3.0:0.1"},
            {"wratio", 3.0},   {"k", 10},      {"seeds", 5},   {"seed", 0},
            {"steps", 50000},  {"lr", 0.1}};
  }
  if (sub == "train") {
    return {{"dataset", "blobs"},
            {"blobs",
             {{"k", 4},
              {"n_train", 1000},
              {"n_test", 250},
              {"dim", 20},
              {"separation", 8.0},
              {"spread", 1.0},
              {"seed", 0}}},
            {"mnist",
             {{"dir", ""}, {"train_limit", 0}, {"test_limit", 0}, {"hidden", Json::array({128, 128})}}},
            {"loss", Json::array({"ce", "agce(a=1,q=2)", "aul(a=2,p=0.9)", "mae"})},
            {"noise", Json::array({"symmetric:0.6"})},
            {"hidden", Json::array({64, 64})},
            {"epochs", 40},
            {"batch_size", 32},
            {"learn_rate", 0.05},
            {"momentum", 0.9},
            {"weight_decay", 0.0},
            {"cosine_anneal", true},
            {"seeds", 3},
            {"seed", 0}};
  }
  if (sub == "bench") {
    return {{"repeats", 3}, {"seed", 0}};
  }
  throw InvalidInput("unknown subcommand '" + std::string(sub) + "'");
}

bool same_kind(const Json& slot, const Json& value) {
  if (slot.is_number_float()) return value.is_number();
  if (slot.is_number_integer()) return value.is_number_integer();
  return slot.type() == value.type();
}

std::string type_label(const Json& j) {
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  return j.type_name();
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"losses", "asym",  "calib", "bound",
                                              "noise",  "fig2", "train", "bench"};
  return names;
}

Json default_config(std::string_view subcommand) { return defaults_for(subcommand); }

Json merge_config(const Json& base, const Json& override_values, const std::string& prefix) {
  if (!override_values.is_object()) {
    throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
  }
  Json merged = base;
  for (const auto& [key, value] : override_values.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError(path, "unknown key");
    const Json& slot = base.at(key);
    if (!same_kind(slot, value)) {
      throw ConfigError(path, "expected " + type_label(slot) + ", got " + type_label(value));
    }
    if (slot.is_object()) {
      merged[key] = merge_config(slot, value, path);
      continue;
    }
    if (slot.is_array() && !slot.empty()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!same_kind(slot.front(), value[i])) {
          throw ConfigError(path + "[" + std::to_string(i) + "]",
                            "expected " + type_label(slot.front()) + ", got " +
                                type_label(value[i]));
        }
      }
    }
    // Keep floating slots floating so the resolved dump is stable.
    merged[key] = slot.is_number_float() ? Json(value.get<double>()) : value;
    if (slot.is_array() && !slot.empty() && slot.front().is_number_float()) {
      for (auto& v : merged[key]) v = v.get<double>();
    }
  }
  return merged;
}

Json load_config(const std::filesystem::path& path, std::string_view subcommand) {
  const std::string text = read_file(path);
  Json parsed;
  try {
    parsed = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return merge_config(default_config(subcommand), parsed);
}

std::string config_hash(const Json& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace alf::cli
