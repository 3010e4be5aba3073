#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "alf/dataset.hpp"

namespace alf {

/// Fully connected network with ReLU hidden layers and raw logits out.
class Mlp {
 public:
  struct Layer {
    Eigen::MatrixXf weight;  // out x in
    Eigen::VectorXf bias;
  };

  /// dims = {input, hidden..., k}. Parameters start uniform in
  /// +-1/sqrt(fan_in), seeded.
  Mlp(std::vector<std::size_t> dims, std::uint64_t seed);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t num_classes() const noexcept { return dims_.back(); }
  std::vector<Layer>& layers() noexcept { return layers_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  /// Logits for every row of x (n x input), as an n x k matrix.
  Eigen::MatrixXf forward(const Eigen::Ref<const FeatureMatrix>& x) const;

  /// Like forward, also keeping each layer's post-activation output for
  /// backpropagation; activations[0] is the input.
  Eigen::MatrixXf forward(const Eigen::MatrixXf& x, std::vector<Eigen::MatrixXf>& activations) const;

  /// Parameter gradients given d(loss)/d(logits) and the activations from
  /// the matching forward pass.
  std::vector<Layer> backward(const std::vector<Eigen::MatrixXf>& activations,
                              Eigen::MatrixXf grad_logits) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<Layer> layers_;
};

}  // namespace alf
