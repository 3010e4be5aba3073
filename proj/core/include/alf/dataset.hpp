#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace alf {

using FeatureMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Features (one row per sample), observed labels and, after corruption, the
/// original labels.
struct LabeledDataset {
  FeatureMatrix features;
  std::vector<std::size_t> labels;
  std::optional<std::vector<std::size_t>> true_labels;
  std::size_t k = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }

  /// Throws InvalidInput if labels, rows or true_labels disagree, a label is
  /// out of range or a feature is non-finite.
  void validate() const;
};

/// k class centres at pairwise distance >= separation, seeded. For k <= dim the
/// centres are scaled vertices of a random orthonormal frame, all exactly
/// separation apart.
std::vector<Eigen::VectorXd> blob_centers(std::size_t k, std::size_t dim, double separation,
                                          std::uint64_t seed);

/// Isotropic Gaussian clusters of n_per_class points around blob_centers(seed).
/// Different stream values draw fresh points around the same centres, which
/// gives matching train and test sets. Rows are grouped by class.
LabeledDataset make_blobs(std::size_t k, std::size_t n_per_class, std::size_t dim,
                          double separation, double spread, std::uint64_t seed,
                          std::uint64_t stream = 0);

/// Reads an IDX image file (magic 0x00000803) and label file (0x00000801);
/// pixel bytes are scaled to [0, 1]. FormatError carries the failing offset.
LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);

/// First n samples (all of them if n >= size).
LabeledDataset head(const LabeledDataset& data, std::size_t n);

}  // namespace alf
