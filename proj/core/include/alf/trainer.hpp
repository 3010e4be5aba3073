#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "alf/csv.hpp"
#include "alf/dataset.hpp"
#include "alf/loss_spec.hpp"
#include "alf/mlp.hpp"
#include "alf/noise.hpp"

namespace alf {

struct TrainConfig {
  std::size_t epochs = 40;
  std::size_t batch_size = 32;
  double learn_rate = 0.05;
  double momentum = 0.9;
  double weight_decay = 0.0;
  bool cosine_anneal = true;
  std::uint64_t seed = 0;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

/// Learning rate used during epoch e: cosine from learn_rate at e = 0 down to 0
/// at the final epoch, or constant without annealing.
double epoch_learn_rate(const TrainConfig& cfg, std::size_t epoch) noexcept;

struct EpochStats {
  std::size_t epoch;
  double train_loss;  // mean batch loss on the (possibly noisy) training labels
  double test_acc;    // NaN without a test set
};

struct TrainResult {
  Mlp model;
  std::vector<EpochStats> history;
};

/// Mini-batch SGD with momentum (v = mu v + g), decoupled weight decay and
/// seeded shuffling and initialisation. Deterministic in (dims, cfg, data).
/// Throws DivergenceError (carrying the epoch) on a non-finite loss.
TrainResult train(const std::vector<std::size_t>& model_dims, const TrainConfig& cfg,
                  const LossSpec& spec, const LabeledDataset& data,
                  const LabeledDataset* test = nullptr);

/// Applies one SGD step (no momentum history, no decay) on the given rows and
/// returns the batch loss before the step.
double sgd_step(Mlp& model, const LossSpec& spec, const LabeledDataset& data,
                const std::vector<std::size_t>& rows, double learn_rate);

/// Mean loss of the model over the given rows.
double batch_loss(const Mlp& model, const LossSpec& spec, const LabeledDataset& data,
                  const std::vector<std::size_t>& rows);

/// Fraction of rows whose argmax logit equals the label.
double evaluate(const Mlp& model, const LabeledDataset& data);

struct NamedDataset {
  std::string name;
  LabeledDataset train;
  LabeledDataset test;
};

struct EpochRow {
  std::string dataset;
  std::string loss;
  std::string noise_kind;
  double eta;
  std::uint64_t seed;
  std::size_t epoch;
  double train_loss;
  double test_acc;
};

struct SummaryRow {
  std::string dataset;
  std::string loss;
  std::string noise_kind;
  double eta;
  std::size_t n_seeds;
  double mean_acc;
  double std_acc;  // sample standard deviation, 0 for a single seed
};

struct RunRecord {
  std::string dataset;
  std::string loss;
  std::string noise_kind;
  double eta;
  std::uint64_t seed;
  double final_acc;
  double seconds;  // wall-clock time of the training run
};

struct ExperimentReport {
  std::vector<EpochRow> epochs;
  std::vector<SummaryRow> summary;
  std::vector<RunRecord> runs;

  CsvTable epoch_table() const;
  CsvTable summary_table() const;
};

/// For every (dataset, noise, spec, seed): corrupt the training labels, train,
/// and score the final model on the clean test set. Seeds are cfg.seed + s for
/// s < n_seeds; labels are corrupted identically for every spec at a seed.
ExperimentReport run_noise_experiment(const std::vector<LossSpec>& specs,
                                      const std::vector<NoiseModel>& noise_models,
                                      const std::vector<NamedDataset>& datasets,
                                      const std::vector<std::size_t>& hidden,
                                      const TrainConfig& cfg, std::size_t n_seeds);

}  // namespace alf
