#include "alf/prob.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alf/errors.hpp"

namespace alf {

ProbVector::ProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) throw InvalidInput("probability vector needs at least 2 entries");
  double total = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double v = entries_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput("probability entry " + std::to_string(i) + " outside [0, 1]");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw InvalidInput("probability entries sum to " + std::to_string(total) + ", not 1");
  }
}

ProbVector ProbVector::uniform(std::size_t k) {
  if (k < 2) throw InvalidInput("uniform probability vector needs k >= 2");
  return ProbVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

ProbVector ProbVector::one_hot(std::size_t k, std::size_t index) {
  if (index >= k) throw InvalidInput("one-hot index out of range");
  std::vector<double> e(k, 0.0);
  e[index] = 1.0;
  return ProbVector(std::move(e));
}

Logits::Logits(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidInput("logits must not be empty");
  for (double v : entries_) {
    if (!std::isfinite(v)) throw InvalidInput("logits must be finite");
  }
}

void softmax_into(std::span<const double> z, std::span<double> out) noexcept {
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

std::vector<double> softmax(std::span<const double> z) {
  if (z.empty()) throw InvalidInput("softmax of an empty vector");
  for (double v : z) {
    if (!std::isfinite(v)) throw InvalidInput("softmax input must be finite");
  }
  std::vector<double> out(z.size());
  softmax_into(z, out);
  return out;
}

ProbVector softmax(const Logits& z) { return ProbVector(softmax(z.values())); }

}  // namespace alf
