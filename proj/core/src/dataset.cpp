#include "alf/dataset.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "alf/errors.hpp"
#include "alf/rng.hpp"

namespace alf {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::string& file) {
  if (bytes.size() < offset + 4) {
    throw FormatError(file + ": truncated header", bytes.size());
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void expect_magic(const std::vector<unsigned char>& bytes, std::uint32_t magic,
                  const std::string& file) {
  if (bytes.empty()) throw FormatError(file + ": empty file", 0);
  if (read_be32(bytes, 0, file) != magic) throw FormatError(file + ": bad magic number", 0);
}

void expect_size(const std::vector<unsigned char>& bytes, std::uint64_t needed,
                 const std::string& file) {
  if (bytes.size() < needed) throw FormatError(file + ": truncated data", bytes.size());
  if (bytes.size() > needed) throw FormatError(file + ": trailing bytes", needed);
}

}  // namespace

void LabeledDataset::validate() const {
  if (k < 2) throw InvalidInput("dataset needs k >= 2");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw InvalidInput("feature rows and labels differ in count");
  }
  if (true_labels && true_labels->size() != labels.size()) {
    throw InvalidInput("true labels and labels differ in count");
  }
  for (std::size_t y : labels) {
    if (y >= k) throw InvalidInput("label out of range");
  }
  if (true_labels) {
    for (std::size_t y : *true_labels) {
      if (y >= k) throw InvalidInput("true label out of range");
    }
  }
  if (!features.allFinite()) throw InvalidInput("features must be finite");
}

std::vector<Eigen::VectorXd> blob_centers(std::size_t k, std::size_t dim, double separation,
                                          std::uint64_t seed) {
  if (k < 2 || dim < 2) throw InvalidInput("blobs need k >= 2 and dim >= 2");
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw InvalidInput("separation must be positive");
  }
  Rng rng(mix_seed(seed, 0xCE17E25));
  const auto gaussian = [&] {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (auto& x : v) x = rng.normal();
    return v;
  };
  std::vector<Eigen::VectorXd> centers;
  if (k <= dim) {
    // Gram-Schmidt on Gaussian draws; orthonormal e_i, e_j are sqrt(2) apart.
    const double scale = separation / std::sqrt(2.0);
    while (centers.size() < k) {
      Eigen::VectorXd v = gaussian();
      for (const auto& c : centers) v -= v.dot(c) * c;
      const double norm = v.norm();
      if (norm < 1e-8) continue;
      centers.push_back(v / norm);
    }
    for (auto& c : centers) c *= scale;
    return centers;
  }
  double radius = separation * std::pow(static_cast<double>(k), 1.0 / static_cast<double>(dim));
  std::size_t rejected = 0;
  while (centers.size() < k) {
    Eigen::VectorXd v = gaussian() * radius;
    bool ok = true;
    for (const auto& c : centers) ok = ok && (v - c).norm() >= separation;
    if (ok) {
      centers.push_back(std::move(v));
    } else if (++rejected % 1000 == 0) {
      radius *= 1.5;
    }
  }
  return centers;
}

LabeledDataset make_blobs(std::size_t k, std::size_t n_per_class, std::size_t dim,
                          double separation, double spread, std::uint64_t seed,
                          std::uint64_t stream) {
  if (n_per_class < 1) throw InvalidInput("blobs need at least one point per class");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw InvalidInput("spread must be >= 0");
  const auto centers = blob_centers(k, dim, separation, seed);
  Rng rng(mix_seed(seed, mix_seed(stream, 0xB10B5)));
  LabeledDataset data;
  data.k = k;
  data.features.resize(static_cast<Eigen::Index>(k * n_per_class), static_cast<Eigen::Index>(dim));
  data.labels.reserve(k * n_per_class);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t n = 0; n < n_per_class; ++n, ++row) {
      for (std::size_t d = 0; d < dim; ++d) {
        const auto col = static_cast<Eigen::Index>(d);
        data.features(row, col) = static_cast<float>(centers[c](col) + spread * rng.normal());
      }
      data.labels.push_back(c);
    }
  }
  return data;
}

LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
  const std::string image_name = images_path.filename().string();
  const std::string label_name = labels_path.filename().string();
  const auto images = slurp(images_path);
  const auto labels = slurp(labels_path);

  expect_magic(images, kImageMagic, image_name);
  const std::uint64_t n = read_be32(images, 4, image_name);
  const std::uint64_t rows = read_be32(images, 8, image_name);
  const std::uint64_t cols = read_be32(images, 12, image_name);
  expect_size(images, 16 + n * rows * cols, image_name);

  expect_magic(labels, kLabelMagic, label_name);
  const std::uint64_t n_labels = read_be32(labels, 4, label_name);
  expect_size(labels, 8 + n_labels, label_name);
  if (n_labels != n) throw InvalidInput("image and label files hold different sample counts");
  if (n == 0) throw InvalidInput("IDX files hold no samples");

  LabeledDataset data;
  const std::uint64_t d = rows * cols;
  data.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < d; ++j) {
      data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<float>(images[16 + i * d + j]) / 255.0f;
    }
  }
  std::size_t top = 1;
  data.labels.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    data.labels.push_back(labels[8 + i]);
    top = std::max<std::size_t>(top, labels[8 + i]);
  }
  data.k = top + 1;
  return data;
}

LabeledDataset head(const LabeledDataset& data, std::size_t n) {
  n = std::min(n, data.size());
  LabeledDataset out;
  out.k = data.k;
  out.features = data.features.topRows(static_cast<Eigen::Index>(n));
  out.labels.assign(data.labels.begin(), data.labels.begin() + static_cast<std::ptrdiff_t>(n));
  if (data.true_labels) {
    out.true_labels.emplace(data.true_labels->begin(),
                            data.true_labels->begin() + static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

}  // namespace alf
