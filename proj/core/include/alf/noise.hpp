#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace alf {

enum class NoiseKind { symmetric, asymmetric_map, grouped_circular, custom };

std::string_view noise_kind_name(NoiseKind kind) noexcept;

/// Class-conditional label noise: T[i][j] is the probability that true class i
/// is observed as j. Rows are stochastic.
class NoiseModel {
 public:
  /// Throws InvalidInput unless the matrix is square, k >= 2, entries lie in
  /// [0, 1] and each row sums to 1 within 1e-9.
  NoiseModel(std::vector<std::vector<double>> transition, NoiseKind kind, double rate);

  std::size_t k() const noexcept { return transition_.size(); }
  NoiseKind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  double operator()(std::size_t from, std::size_t to) const { return transition_[from][to]; }
  const std::vector<std::vector<double>>& transition() const noexcept { return transition_; }

  /// k lines of k comma-separated probabilities.
  std::string to_csv() const;
  static NoiseModel from_csv(std::string_view text);

 private:
  std::vector<std::vector<double>> transition_;
  NoiseKind kind_;
  double rate_;
};

using FlipMap = std::vector<std::pair<std::size_t, std::size_t>>;

NoiseModel symmetric_noise_matrix(std::size_t k, double eta);

/// Each source row keeps 1 - eta on the diagonal and sends eta to its target.
NoiseModel asymmetric_map_matrix(std::size_t k, double eta, const FlipMap& flips);

/// Within consecutive blocks of group_size classes, class j flips to the next
/// class of its block (wrapping) with probability eta.
NoiseModel grouped_circular_matrix(std::size_t k, double eta, std::size_t group_size);

/// Digit flips 7->1, 2->7, 5<->6, 3->8.
FlipMap mnist_flips();

/// CIFAR-10 flips truck->automobile, bird->airplane, deer->horse, cat<->dog.
FlipMap cifar10_flips();

/// Builds a model from a compact flag: "symmetric:ETA", "asym-mnist:ETA",
/// "asym-cifar10:ETA", "grouped:ETA:GROUP" or "none".
NoiseModel parse_noise_flag(std::string_view text, std::size_t k);

struct CorruptedLabels {
  std::vector<std::size_t> labels;
  std::vector<bool> flipped;
};

/// Resamples every label from its transition row with a generator seeded by
/// seed. Deterministic in (labels, noise, seed).
CorruptedLabels corrupt_labels(std::span<const std::size_t> labels, const NoiseModel& noise,
                               std::uint64_t seed);

/// Every row keeps strictly more mass on its diagonal than on any other entry.
bool is_clean_dominant(const NoiseModel& noise) noexcept;

enum class Dominance { dominant, not_dominant, indeterminate };

/// Per true class: is the true label strictly the most frequent observed label?
/// Classes with no samples are indeterminate.
std::vector<Dominance> empirical_dominance(std::span<const std::size_t> true_labels,
                                           std::span<const std::size_t> noisy_labels,
                                           std::size_t k);

}  // namespace alf
