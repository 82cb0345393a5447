#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tact/data/synthetic.hpp"
#include "tact/io/key_value.hpp"
#include "tact/model/config.hpp"
#include "tact/sampler/trainer.hpp"

namespace tact {

/// Which scored split the calibration buckets are fitted on.
enum class CalibrationFit { Train, Test };

std::string_view calibration_fit_name(CalibrationFit fit);
CalibrationFit parse_calibration_fit(std::string_view name);

/// Everything one command needs, as a flat key space:
///   data     train_data, test_data, history_length, category_vocab
///   model    onehot_dim, ff_width, item_dim, hidden_dim, gru_layers,
///            attention_dim, aux_dim, time_aware
///   training every TrainConfig key
///   calibration_buckets, calibration_epsilon, calibration_fit, baseline_run
///   synthetic.<key> for every synthetic generator key except L
/// When train_data is empty the data come from the synthetic generator.
struct RunConfig {
  std::string train_data;
  std::string test_data;
  std::size_t history_length = 10;
  std::size_t category_vocab = 0;  ///< 0 = infer from the data
  SyntheticConfig synthetic;
  ModelConfig model;
  TrainConfig train;
  std::size_t calibration_buckets = 10000;
  double calibration_epsilon = 1e-4;
  CalibrationFit calibration_fit = CalibrationFit::Train;
  std::string baseline_run;

  bool synthetic_data() const { return train_data.empty(); }

  /// Throws ConfigError for inconsistent values.
  void validate() const;

  KeyValueConfig to_key_values() const;
  /// Overrides `base` with the entries of `kv`; unknown keys are rejected.
  static RunConfig from_key_values(const KeyValueConfig& kv, RunConfig base);
  static RunConfig from_key_values(const KeyValueConfig& kv);
  static const std::vector<std::string>& keys();
};

/// Generator truth parallel to one dataset's partitions.
struct SplitTruth {
  std::vector<GroundTruth> positives;
  std::vector<GroundTruth> negatives;
};

/// Train and optional test data of a run, sharing one schema.
struct RunData {
  Dataset train;
  std::optional<Dataset> test;
  /// Present when the data are synthetic.
  std::optional<SplitTruth> train_truth;
  std::optional<SplitTruth> test_truth;

  const DatasetInfo& info() const { return train.info(); }
};

RunData load_run_data(const RunConfig& config);

/// The configured widths completed with what the data imply.
ModelConfig model_config_for(const RunConfig& config, const DatasetInfo& info);

}  // namespace tact
