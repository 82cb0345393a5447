#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "tact/data/time_signals.hpp"

namespace tact {

inline constexpr std::size_t kRawFeatureDim = 50;
/// Category index reserved for padding items.
inline constexpr std::uint32_t kNullCategory = 0;

using RawFeatures = std::vector<double>;

/// One clicked or exposed item. Raw feature vectors are shared between
/// records of the same catalog item.
struct ItemRecord {
  std::shared_ptr<const RawFeatures> raw;
  TimeSignals time;
  std::uint32_t cid3 = kNullCategory;
  std::int64_t item_id = -1;  ///< catalog identity when known
  bool padding = false;       ///< left-padding for histories shorter than L

  const RawFeatures& features() const { return *raw; }

  /// The designated null item placed at `time`.
  static ItemRecord null_item(const TimeSignals& time, std::size_t raw_dim = kRawFeatureDim);

  friend bool operator==(const ItemRecord& a, const ItemRecord& b);
};

/// One user-item exposure.
struct Sample {
  std::uint64_t user = 0;
  std::vector<ItemRecord> history;  ///< ascending click time
  ItemRecord target;
  std::vector<double> aux;
  int label = 0;

  bool operator==(const Sample&) const = default;
};

struct DatasetInfo {
  std::size_t category_vocab = 1;  ///< cid3 values lie in [0, category_vocab)
  std::size_t history_length = 10;
  std::size_t aux_dim = 0;
  std::size_t raw_dim = kRawFeatureDim;

  bool operator==(const DatasetInfo&) const = default;
};

/// Samples partitioned by label.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(DatasetInfo info) : info_(info) {}

  const DatasetInfo& info() const { return info_; }
  DatasetInfo& info() { return info_; }

  const std::vector<Sample>& positives() const { return positives_; }
  const std::vector<Sample>& negatives() const { return negatives_; }

  /// Routes the sample to the partition matching its label.
  void add(Sample s);

  std::size_t size() const { return positives_.size() + negatives_.size(); }
  bool empty() const { return size() == 0; }

  /// Positive fraction; nullopt for an empty dataset.
  std::optional<double> ctr() const;

  /// Calls fn(sample) over positives then negatives.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const Sample& s : positives_) fn(s);
    for (const Sample& s : negatives_) fn(s);
  }

  bool operator==(const Dataset&) const = default;

 private:
  DatasetInfo info_;
  std::vector<Sample> positives_;
  std::vector<Sample> negatives_;
};

/// Checks one sample against the dataset schema; throws ValidationError.
void validate_sample(const Sample& s, const DatasetInfo& info);

}  // namespace tact
