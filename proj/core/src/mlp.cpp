#include "alf/mlp.hpp"

#include <cmath>

#include "alf/errors.hpp"
#include "alf/rng.hpp"

namespace alf {

Mlp::Mlp(std::vector<std::size_t> dims, std::uint64_t seed) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw InvalidInput("network needs input and output sizes");
  for (std::size_t d : dims_) {
    if (d == 0) throw InvalidInput("layer sizes must be positive");
  }
  if (dims_.back() < 2) throw InvalidInput("network needs at least 2 outputs");
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(dims_[l]);
    const auto out = static_cast<Eigen::Index>(dims_[l + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Layer layer{Eigen::MatrixXf(out, in), Eigen::VectorXf(out)};
    for (Eigen::Index i = 0; i < out; ++i) {
      for (Eigen::Index j = 0; j < in; ++j) {
        layer.weight(i, j) = static_cast<float>(rng.uniform(-bound, bound));
      }
    }
    for (Eigen::Index i = 0; i < out; ++i) layer.bias(i) = static_cast<float>(rng.uniform(-bound, bound));
    layers_.push_back(std::move(layer));
  }
}

Eigen::MatrixXf Mlp::forward(const Eigen::Ref<const FeatureMatrix>& x) const {
  if (static_cast<std::size_t>(x.cols()) != dims_.front()) {
    throw InvalidInput("input width does not match the network");
  }
  Eigen::MatrixXf h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXf next = h * layers_[l].weight.transpose();
    next.rowwise() += layers_[l].bias.transpose();
    if (l + 1 < layers_.size()) next = next.cwiseMax(0.0f);
    h = std::move(next);
  }
  return h;
}

Eigen::MatrixXf Mlp::forward(const Eigen::MatrixXf& x,
                             std::vector<Eigen::MatrixXf>& activations) const {
  activations.clear();
  activations.push_back(x);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXf next = activations.back() * layers_[l].weight.transpose();
    next.rowwise() += layers_[l].bias.transpose();
    if (l + 1 == layers_.size()) return next;
    activations.push_back(next.cwiseMax(0.0f));
  }
  return {};
}

std::vector<Mlp::Layer> Mlp::backward(const std::vector<Eigen::MatrixXf>& activations,
                                      Eigen::MatrixXf grad_logits) const {
  std::vector<Layer> grads(layers_.size());
  Eigen::MatrixXf delta = std::move(grad_logits);
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Eigen::MatrixXf& input = activations[l];
    grads[l].weight = delta.transpose() * input;
    grads[l].bias = delta.colwise().sum().transpose();
    if (l == 0) break;
    Eigen::MatrixXf upstream = delta * layers_[l].weight;
    // ReLU derivative: pass where the stored activation is positive.
    delta = upstream.cwiseProduct((input.array() > 0.0f).cast<float>().matrix());
  }
  return grads;
}

}  // namespace alf
