#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alf {

inline constexpr double kSimplexTolerance = 1e-9;

/// A point on the probability simplex: k >= 2 entries in [0, 1] summing to 1.
class ProbVector {
 public:
  /// Throws InvalidInput unless the entries form a valid simplex point.
  explicit ProbVector(std::vector<double> entries);

  static ProbVector uniform(std::size_t k);
  static ProbVector one_hot(std::size_t k, std::size_t index);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> entries_;
};

/// Unbounded class scores; every entry finite.
class Logits {
 public:
  explicit Logits(std::vector<double> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }

 private:
  std::vector<double> entries_;
};

ProbVector softmax(const Logits& z);

/// Max-subtracted softmax of raw scores. Throws InvalidInput on non-finite input.
std::vector<double> softmax(std::span<const double> z);

/// Writes softmax(z) into out (same size), no validation.
void softmax_into(std::span<const double> z, std::span<double> out) noexcept;

}  // namespace alf
