#include "alf/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "alf/errors.hpp"
#include "alf/losses.hpp"
#include "alf/rng.hpp"

namespace alf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXf gather(const LabeledDataset& data, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXf x(static_cast<Eigen::Index>(rows.size()), data.features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = data.features.row(static_cast<Eigen::Index>(rows[i]));
  }
  return x;
}

// Mean loss over the batch and its gradient with respect to the logits.
double loss_and_grad(const LossSpec& spec, const Eigen::MatrixXf& logits,
                     const LabeledDataset& data, const std::vector<std::size_t>& rows,
                     Eigen::MatrixXf& grad) {
  const auto k = static_cast<std::size_t>(logits.cols());
  std::vector<double> z(k), g(k), scratch(k);
  grad.resize(logits.rows(), logits.cols());
  const double scale = 1.0 / static_cast<double>(rows.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    for (std::size_t j = 0; j < k; ++j) z[j] = logits(i, static_cast<Eigen::Index>(j));
    total += loss_and_grad_logits(spec, z, data.labels[rows[static_cast<std::size_t>(i)]], g,
                                  scratch);
    for (std::size_t j = 0; j < k; ++j) {
      grad(i, static_cast<Eigen::Index>(j)) = static_cast<float>(g[j] * scale);
    }
  }
  return total * scale;
}

void check_compatible(const std::vector<std::size_t>& dims, const LabeledDataset& data) {
  if (dims.size() < 2) throw InvalidInput("network needs input and output sizes");
  if (dims.front() != data.dim()) throw InvalidInput("network input size differs from features");
  if (dims.back() != data.k) throw InvalidInput("network output size differs from class count");
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidInput("epochs must be >= 1");
  if (batch_size < 1) throw InvalidInput("batch size must be >= 1");
  if (!(learn_rate > 0.0) || !std::isfinite(learn_rate)) throw InvalidInput("learn rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidInput("momentum must lie in [0, 1)");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw InvalidInput("weight decay must be >= 0");
  }
}

double epoch_learn_rate(const TrainConfig& cfg, std::size_t epoch) noexcept {
  if (!cfg.cosine_anneal || cfg.epochs < 2) return cfg.learn_rate;
  const double phase = static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1);
  return cfg.learn_rate * 0.5 * (1.0 + std::cos(std::numbers::pi * phase));
}

double batch_loss(const Mlp& model, const LossSpec& spec, const LabeledDataset& data,
                  const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw InvalidInput("empty batch");
  const Eigen::MatrixXf logits = model.forward(FeatureMatrix(gather(data, rows)));
  Eigen::MatrixXf grad;
  return loss_and_grad(spec, logits, data, rows, grad);
}

double sgd_step(Mlp& model, const LossSpec& spec, const LabeledDataset& data,
                const std::vector<std::size_t>& rows, double learn_rate) {
  if (rows.empty()) throw InvalidInput("empty batch");
  std::vector<Eigen::MatrixXf> acts;
  const Eigen::MatrixXf logits = model.forward(gather(data, rows), acts);
  Eigen::MatrixXf grad;
  const double loss = loss_and_grad(spec, logits, data, rows, grad);
  const auto grads = model.backward(acts, std::move(grad));
  const auto lr = static_cast<float>(learn_rate);
  for (std::size_t l = 0; l < grads.size(); ++l) {
    model.layers()[l].weight -= lr * grads[l].weight;
    model.layers()[l].bias -= lr * grads[l].bias;
  }
  return loss;
}

TrainResult train(const std::vector<std::size_t>& model_dims, const TrainConfig& cfg,
                  const LossSpec& spec, const LabeledDataset& data, const LabeledDataset* test) {
  cfg.validate();
  data.validate();
  if (data.size() == 0) throw InvalidInput("training set is empty");
  check_compatible(model_dims, data);

  TrainResult result{Mlp(model_dims, mix_seed(cfg.seed, 0x1417)), {}};
  Mlp& model = result.model;
  std::vector<Mlp::Layer> velocity;
  for (const auto& layer : model.layers()) {
    velocity.push_back({Eigen::MatrixXf::Zero(layer.weight.rows(), layer.weight.cols()),
                        Eigen::VectorXf::Zero(layer.bias.size())});
  }

  Rng shuffle_rng(mix_seed(cfg.seed, 0x5407));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> rows;
  std::vector<Eigen::MatrixXf> acts;
  Eigen::MatrixXf grad;
  const auto mu = static_cast<float>(cfg.momentum);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }
    const auto lr = static_cast<float>(epoch_learn_rate(cfg, epoch));
    const auto decay = static_cast<float>(1.0 - epoch_learn_rate(cfg, epoch) * cfg.weight_decay);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      rows.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                  order.begin() + static_cast<std::ptrdiff_t>(stop));
      const Eigen::MatrixXf logits = model.forward(gather(data, rows), acts);
      const double loss = loss_and_grad(spec, logits, data, rows, grad);
      if (!std::isfinite(loss)) throw DivergenceError("training loss became non-finite", epoch);
      loss_sum += loss;
      ++batches;
      const auto grads = model.backward(acts, std::move(grad));
      for (std::size_t l = 0; l < grads.size(); ++l) {
        auto& layer = model.layers()[l];
        velocity[l].weight = mu * velocity[l].weight + grads[l].weight;
        velocity[l].bias = mu * velocity[l].bias + grads[l].bias;
        if (cfg.weight_decay > 0.0) {
          layer.weight *= decay;
          layer.bias *= decay;
        }
        layer.weight -= lr * velocity[l].weight;
        layer.bias -= lr * velocity[l].bias;
      }
    }
    const double mean_loss = loss_sum / static_cast<double>(batches);
    result.history.push_back({epoch, mean_loss, test ? evaluate(model, *test) : kNaN});
  }
  return result;
}

double evaluate(const Mlp& model, const LabeledDataset& data) {
  if (data.size() == 0) throw InvalidInput("cannot evaluate on an empty dataset");
  check_compatible(model.dims(), data);
  const Eigen::MatrixXf logits = model.forward(data.features);
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best = 0;
    logits.row(i).maxCoeff(&best);
    if (static_cast<std::size_t>(best) == data.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

CsvTable ExperimentReport::epoch_table() const {
  CsvTable t;
  t.header = {"dataset", "loss", "noise_kind", "eta", "seed", "epoch", "train_loss", "test_acc"};
  for (const auto& r : epochs) {
    t.rows.push_back({r.dataset, r.loss, r.noise_kind, format_number(r.eta),
                      std::to_string(r.seed), std::to_string(r.epoch),
                      format_number(r.train_loss), format_number(r.test_acc)});
  }
  return t;
}

CsvTable ExperimentReport::summary_table() const {
  CsvTable t;
  t.header = {"dataset", "loss", "noise_kind", "eta", "n_seeds", "mean_acc", "std_acc"};
  for (const auto& r : summary) {
    t.rows.push_back({r.dataset, r.loss, r.noise_kind, format_number(r.eta),
                      std::to_string(r.n_seeds), format_number(r.mean_acc),
                      format_number(r.std_acc)});
  }
  return t;
}

ExperimentReport run_noise_experiment(const std::vector<LossSpec>& specs,
                                      const std::vector<NoiseModel>& noise_models,
                                      const std::vector<NamedDataset>& datasets,
                                      const std::vector<std::size_t>& hidden,
                                      const TrainConfig& cfg, std::size_t n_seeds) {
  if (n_seeds < 1) throw InvalidInput("n_seeds must be >= 1");
  cfg.validate();
  ExperimentReport report;
  for (const auto& ds : datasets) {
    std::vector<std::size_t> dims{ds.train.dim()};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(ds.train.k);
    for (const auto& noise : noise_models) {
      if (noise.k() != ds.train.k) {
        throw InvalidInput("noise model size differs from the class count of " + ds.name);
      }
      for (const auto& spec : specs) {
        const std::string cell = ds.name + " / " + spec.to_string() + " / " +
                                 std::string(noise_kind_name(noise.kind())) + ":" +
                                 format_number(noise.rate());
        std::vector<double> accs;
        for (std::size_t s = 0; s < n_seeds; ++s) {
          TrainConfig run_cfg = cfg;
          run_cfg.seed = cfg.seed + s;
          LabeledDataset noisy = ds.train;
          auto corrupted = corrupt_labels(ds.train.labels, noise, mix_seed(run_cfg.seed, 0xF11B));
          noisy.true_labels = ds.train.labels;
          noisy.labels = std::move(corrupted.labels);
          const auto started = std::chrono::steady_clock::now();
          TrainResult run = [&] {
            try {
              return train(dims, run_cfg, spec, noisy, &ds.test);
            } catch (const DivergenceError& e) {
              throw DivergenceError(cell + " seed " + std::to_string(run_cfg.seed) + ": " +
                                        e.what(),
                                    e.step());
            }
          }();
          for (const auto& h : run.history) {
            report.epochs.push_back({ds.name, spec.to_string(),
                                     std::string(noise_kind_name(noise.kind())), noise.rate(),
                                     run_cfg.seed, h.epoch, h.train_loss, h.test_acc});
          }
          const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
          accs.push_back(run.history.back().test_acc);
          report.runs.push_back({ds.name, spec.to_string(),
                                 std::string(noise_kind_name(noise.kind())), noise.rate(),
                                 run_cfg.seed, accs.back(), elapsed.count()});
        }
        const double n = static_cast<double>(accs.size());
        const double mean = std::accumulate(accs.begin(), accs.end(), 0.0) / n;
        double var = 0.0;
        for (double a : accs) var += (a - mean) * (a - mean);
        const double sd = accs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        report.summary.push_back({ds.name, spec.to_string(),
                                  std::string(noise_kind_name(noise.kind())), noise.rate(),
                                  accs.size(), mean, sd});
      }
    }
  }
  return report;
}

}  // namespace alf
