#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tact/data/sample.hpp"
#include "tact/io/key_value.hpp"
#include "tact/model/network.hpp"
#include "tact/sampler/kinds.hpp"

namespace tact {

struct TrainConfig {
  SamplerKind sampler = SamplerKind::Rgan;
  std::size_t epochs = 50;
  std::size_t steps_per_epoch = 30;
  std::size_t pretrain_epochs = 2;  ///< uniform-sampling epochs for D before pairwise training
  double lr_d = 0.02;
  double lr_g = 0.01;
  std::size_t lr_halving_epochs = 10;
  double gamma = 1.0;
  double lambda_item = 3.0;
  double lambda_history = 5.0;
  std::size_t candidates = 20;       ///< C
  std::size_t samples_per_positive = 1;  ///< K
  double temperature = 20.0;         ///< T0
  double temperature_decay = 0.98;
  std::size_t under_sample_ratio = 5;
  std::size_t eval_every = 1;        ///< test AUC every n epochs (the last epoch always); 0 = last only
  std::size_t snapshot_negatives = 2000;
  std::size_t tau_positives = 8;     ///< positives of the last batch used for the epoch tau diagnostic
  std::uint64_t seed = 1;

  /// Throws ConfigError for values outside their domain.
  void validate() const;

  KeyValueConfig to_key_values() const;
  static TrainConfig from_key_values(const KeyValueConfig& kv, TrainConfig base);
  static const std::vector<std::string>& keys();
};

/// One row of metrics.csv.
struct StepMetrics {
  std::size_t epoch = 0;  ///< 1-based
  std::size_t step = 0;   ///< 1-based within the epoch
  double d_loss = 0.0;
  std::optional<double> g_surrogate;
  std::optional<double> mean_reward;
  std::optional<double> baseline;
  std::optional<double> temperature;
  double train_auc_snapshot = 0.0;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  std::optional<double> test_auc;
  double d_loss = 0.0;
  std::optional<double> mean_reward;
  std::optional<double> tau;
  std::optional<double> tau_random;
  double train_auc_snapshot = 0.0;
};

struct TrainResult {
  Network discriminator;
  std::optional<Network> generator;
  Network best;                     ///< discriminator at the best evaluated epoch
  std::optional<double> best_test_auc;
  std::size_t best_epoch = 0;
  std::optional<double> final_test_auc;
  std::vector<StepMetrics> steps;
  std::vector<EpochMetrics> epochs;
  std::size_t batch_size = 0;
  /// Under-sampling found fewer negatives than the requested ratio needs.
  bool insufficient_negatives = false;
};

using EpochCallback = std::function<void(const EpochMetrics&, const std::vector<StepMetrics>&)>;

/// Pre-trains D, then runs the selected sampler's loop for `epochs` x
/// `steps_per_epoch` steps. `test` may be null, in which case no test AUC is
/// computed. The callback sees each finished epoch and its step rows.
TrainResult adversarial_train(const Dataset& train, const Dataset* test, const ModelConfig& model,
                              const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace tact
