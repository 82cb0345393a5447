#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tact/data/sample.hpp"
#include "tact/io/key_value.hpp"

namespace tact {

/// Parameters of the synthetic click generator.
struct SyntheticConfig {
  std::size_t n_users = 2000;
  std::size_t n_items = 5000;
  std::size_t n_categories = 20;
  std::size_t n_samples = 100000;
  double ctr = 0.012;
  int horizon_days = 8;
  int test_days = 2;
  std::size_t history_length = 10;
  std::size_t aux_dim = 4;
  /// Logit amplitude of the hour-of-day / day-of-week click propensity.
  double periodic_amplitude = 1.5;
  /// Turns of each user's interest vector around its base over the horizon.
  double drift_rate = 0.5;
  std::int64_t start_time = 1530403200;  // 2018-07-01T00:00:00Z
  std::uint64_t seed = 1;

  static SyntheticConfig from_key_values(const KeyValueConfig& kv);
  static SyntheticConfig from_key_values(const KeyValueConfig& kv, SyntheticConfig base);
  KeyValueConfig to_key_values() const;
  static const std::vector<std::string>& keys();
};

/// Generator-side truth for one sample.
struct GroundTruth {
  double logit = 0.0;
  /// The periodic (hour/day) part of the logit.
  double periodic = 0.0;

  double time_blind_logit() const { return logit - periodic; }
};

/// A generated dataset plus truth arrays parallel to its partitions.
struct SyntheticDataset {
  Dataset data;
  std::vector<GroundTruth> positive_truth;
  std::vector<GroundTruth> negative_truth;
  double intercept = 0.0;
};

/// Deterministic given `config.seed`. Throws ValidationError for an
/// infeasible configuration (ctr * n_samples < 1 and similar).
SyntheticDataset generate_synthetic(const SyntheticConfig& config);

/// Uniform [0, 1) draw behind a sample's label; the label is 1 when the draw
/// is below σ(logit). A pure function of its arguments, so labels never depend
/// on generation order.
double synthetic_label_draw(std::uint64_t seed, std::uint64_t user, std::int64_t item_id, std::int64_t time);

struct SyntheticSplit {
  SyntheticDataset train;
  SyntheticDataset test;
  std::int64_t boundary = 0;  ///< first second of the test period
};

/// Day-boundary split: the last `config.test_days` days form the test set.
SyntheticSplit split_by_day(const SyntheticDataset& all, const SyntheticConfig& config);

}  // namespace tact
