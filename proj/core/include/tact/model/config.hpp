#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "tact/data/sample.hpp"
#include "tact/io/key_value.hpp"

namespace tact {

/// Dimensions of one time-aware attention network.
struct ModelConfig {
  std::size_t raw_dim = kRawFeatureDim;
  std::size_t category_vocab = 1;
  std::size_t onehot_dim = 8;        ///< width of each one-hot reduction
  std::size_t ff_width = 90;         ///< hidden width inside the item network F
  std::size_t item_dim = 90;         ///< d, also the relative-time encoding width
  std::size_t hidden_dim = 90;       ///< h, GRU state width
  std::size_t gru_layers = 2;
  std::size_t attention_dim = 64;    ///< v
  std::size_t aux_in = 0;
  std::size_t aux_dim = 8;
  std::size_t history_length = 10;   ///< L
  /// false gives the "GRU Attention" ablation: no temporal one-hots and no
  /// relative-time term in the attention.
  bool time_aware = true;

  /// Throws ConfigError for zero widths or an odd item_dim.
  void validate() const;

  std::size_t sample_dim() const { return hidden_dim + item_dim + aux_dim; }

  /// Copies vocabulary and widths implied by a dataset.
  static ModelConfig for_dataset(const DatasetInfo& info, ModelConfig base);
  static ModelConfig for_dataset(const DatasetInfo& info);

  KeyValueConfig to_key_values() const;
  static ModelConfig from_key_values(const KeyValueConfig& kv, ModelConfig base);
  static ModelConfig from_key_values(const KeyValueConfig& kv);

  /// FNV-1a hash of the canonical key-value form.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  bool operator==(const ModelConfig&) const = default;
};

}  // namespace tact
