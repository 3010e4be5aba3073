#include "alf/noise.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "alf/csv.hpp"
#include "alf/errors.hpp"
#include "alf/rng.hpp"

namespace alf {
namespace {

constexpr double kRowTolerance = 1e-9;

void check_rate(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw InvalidInput("noise rate must lie in [0, 1)");
}

std::vector<std::vector<double>> identity(std::size_t k) {
  std::vector<std::vector<double>> t(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) t[i][i] = 1.0;
  return t;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

}  // namespace

std::string_view noise_kind_name(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::symmetric: return "symmetric";
    case NoiseKind::asymmetric_map: return "asymmetric_map";
    case NoiseKind::grouped_circular: return "grouped_circular";
    case NoiseKind::custom: return "custom";
  }
  return "?";
}

NoiseModel::NoiseModel(std::vector<std::vector<double>> transition, NoiseKind kind, double rate)
    : transition_(std::move(transition)), kind_(kind), rate_(rate) {
  const std::size_t k = transition_.size();
  if (k < 2) throw InvalidInput("noise model needs k >= 2");
  for (std::size_t i = 0; i < k; ++i) {
    if (transition_[i].size() != k) throw InvalidInput("transition matrix must be square");
    double total = 0.0;
    for (double v : transition_[i]) {
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("transition entries must lie in [0, 1]");
      total += v;
    }
    if (std::abs(total - 1.0) > kRowTolerance) {
      throw InvalidInput("transition row " + std::to_string(i) + " does not sum to 1");
    }
  }
  if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidInput("noise rate must lie in [0, 1]");
}

std::string NoiseModel::to_csv() const {
  std::string out;
  for (const auto& row : transition_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      out += format_number(row[j]);
    }
    out += '\n';
  }
  return out;
}

NoiseModel NoiseModel::from_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<double> row;
    for (std::string_view cell : split(line, ',')) row.push_back(parse_number(cell));
    rows.push_back(std::move(row));
  }
  // The off-diagonal mass of the worst row stands in for the rate.
  double rate = 0.0;
  for (std::size_t i = 0; i < rows.size() && i < rows[i].size(); ++i) {
    rate = std::max(rate, 1.0 - rows[i][i]);
  }
  return NoiseModel(std::move(rows), NoiseKind::custom, std::clamp(rate, 0.0, 1.0));
}

NoiseModel symmetric_noise_matrix(std::size_t k, double eta) {
  if (k < 2) throw InvalidInput("symmetric noise needs k >= 2");
  check_rate(eta);
  const double off = eta / static_cast<double>(k - 1);
  std::vector<std::vector<double>> t(k, std::vector<double>(k, off));
  for (std::size_t i = 0; i < k; ++i) t[i][i] = 1.0 - eta;
  return NoiseModel(std::move(t), NoiseKind::symmetric, eta);
}

NoiseModel asymmetric_map_matrix(std::size_t k, double eta, const FlipMap& flips) {
  if (k < 2) throw InvalidInput("asymmetric noise needs k >= 2");
  check_rate(eta);
  auto t = identity(k);
  std::set<std::size_t> sources;
  for (const auto& [from, to] : flips) {
    if (from >= k || to >= k) throw InvalidInput("flip class out of range");
    if (from == to) throw InvalidInput("flip source equals its target");
    if (!sources.insert(from).second) {
      throw InvalidInput("duplicate flip source " + std::to_string(from));
    }
    t[from][from] = 1.0 - eta;
    t[from][to] = eta;
  }
  return NoiseModel(std::move(t), NoiseKind::asymmetric_map, eta);
}

NoiseModel grouped_circular_matrix(std::size_t k, double eta, std::size_t group_size) {
  if (k < 2) throw InvalidInput("grouped noise needs k >= 2");
  if (group_size < 2 || k % group_size != 0) {
    throw InvalidInput("k must be divisible by a group size >= 2");
  }
  check_rate(eta);
  auto t = identity(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t base = i - i % group_size;
    const std::size_t next = base + (i - base + 1) % group_size;
    t[i][i] = 1.0 - eta;
    t[i][next] = eta;
  }
  return NoiseModel(std::move(t), NoiseKind::grouped_circular, eta);
}

FlipMap mnist_flips() { return {{7, 1}, {2, 7}, {5, 6}, {6, 5}, {3, 8}}; }

FlipMap cifar10_flips() {
  // airplane 0, automobile 1, bird 2, cat 3, deer 4, dog 5, horse 7, truck 9
  return {{9, 1}, {2, 0}, {4, 7}, {3, 5}, {5, 3}};
}

NoiseModel parse_noise_flag(std::string_view text, std::size_t k) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts[0];
  const auto rate_at = [&](std::size_t i) {
    if (parts.size() <= i) throw InvalidInput("noise flag '" + std::string(text) + "' needs a rate");
    return parse_number(parts[i]);
  };
  if (kind == "none" || kind == "clean") {
    if (parts.size() != 1) throw InvalidInput("noise flag 'none' takes no arguments");
    return symmetric_noise_matrix(k, 0.0);
  }
  if (kind == "symmetric" && parts.size() == 2) return symmetric_noise_matrix(k, rate_at(1));
  if ((kind == "asym-mnist" || kind == "asym-cifar10") && parts.size() == 2) {
    if (k != 10) throw InvalidInput(std::string(kind) + " noise needs k = 10");
    return asymmetric_map_matrix(k, rate_at(1),
                                 kind == "asym-mnist" ? mnist_flips() : cifar10_flips());
  }
  if (kind == "grouped" && parts.size() == 3) {
    const double group = parse_number(parts[2]);
    if (!(group >= 2.0) || group != std::floor(group)) {
      throw InvalidInput("group size must be an integer >= 2");
    }
    return grouped_circular_matrix(k, rate_at(1), static_cast<std::size_t>(group));
  }
  throw InvalidInput("unrecognised noise flag '" + std::string(text) + "'");
}

CorruptedLabels corrupt_labels(std::span<const std::size_t> labels, const NoiseModel& noise,
                               std::uint64_t seed) {
  const std::size_t k = noise.k();
  for (std::size_t y : labels) {
    if (y >= k) throw InvalidInput("label " + std::to_string(y) + " out of range");
  }
  Rng rng(seed);
  CorruptedLabels out;
  out.labels.reserve(labels.size());
  out.flipped.reserve(labels.size());
  for (std::size_t y : labels) {
    const auto& row = noise.transition()[y];
    const double draw = rng.uniform();
    double cumulative = 0.0;
    std::size_t chosen = y;
    // Falls back to the true label if rounding leaves the draw beyond the row mass.
    for (std::size_t j = 0; j < k; ++j) {
      cumulative += row[j];
      if (draw < cumulative) {
        chosen = j;
        break;
      }
    }
    out.labels.push_back(chosen);
    out.flipped.push_back(chosen != y);
  }
  return out;
}

bool is_clean_dominant(const NoiseModel& noise) noexcept {
  const std::size_t k = noise.k();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i && !(noise(i, i) > noise(i, j))) return false;
    }
  }
  return true;
}

std::vector<Dominance> empirical_dominance(std::span<const std::size_t> true_labels,
                                           std::span<const std::size_t> noisy_labels,
                                           std::size_t k) {
  if (true_labels.size() != noisy_labels.size()) {
    throw InvalidInput("true and noisy label lists differ in length");
  }
  std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(k, 0));
  for (std::size_t n = 0; n < true_labels.size(); ++n) {
    if (true_labels[n] >= k || noisy_labels[n] >= k) throw InvalidInput("label out of range");
    ++counts[true_labels[n]][noisy_labels[n]];
  }
  std::vector<Dominance> out(k, Dominance::dominant);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& row = counts[i];
    std::size_t total = 0;
    for (std::size_t c : row) total += c;
    if (total == 0) {
      out[i] = Dominance::indeterminate;
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i && row[j] >= row[i]) out[i] = Dominance::not_dominant;
    }
  }
  return out;
}

}  // namespace alf
