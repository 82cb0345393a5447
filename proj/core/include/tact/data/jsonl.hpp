#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "tact/data/sample.hpp"

namespace tact {

/// How to interpret a JSON-Lines dataset.
struct SchemaConfig {
  std::size_t history_length = 10;
  std::size_t raw_dim = kRawFeatureDim;
  /// Size of the cid3 vocabulary; inferred as max(cid3) + 1 when unset.
  std::optional<std::size_t> category_vocab;
  /// Width of the aux vector; taken from the first line when unset.
  std::optional<std::size_t> aux_dim;
  /// Left-pad shorter histories with the null item instead of rejecting them.
  bool pad_short_history = true;
};

/// Parses one sample per line:
///   {"label":0|1, "user":u, "aux":[...], "target":{"raw":[...], "t_a":s, "cid3":c},
///    "history":[{...} x L]}
/// Items may carry explicit "t_m","t_w","t_d","t_h" indices, an "item" id and
/// a "pad" flag. Errors are reported as ValidationError with the line number.
Dataset parse_jsonl(std::istream& in, const SchemaConfig& schema);
Dataset load_jsonl(const std::filesystem::path& path, const SchemaConfig& schema);

/// Writes positives then negatives; doubles use shortest round-trip form.
void write_jsonl(std::ostream& out, const Dataset& ds);
void write_jsonl(const std::filesystem::path& path, const Dataset& ds);

}  // namespace tact
