#include "tact/data/sample.hpp"

#include <string>

#include "tact/error.hpp"

namespace tact {

ItemRecord ItemRecord::null_item(const TimeSignals& time, std::size_t raw_dim) {
  static const auto zeros = std::make_shared<const RawFeatures>(kRawFeatureDim, 0.0);
  ItemRecord item;
  item.raw = raw_dim == kRawFeatureDim ? zeros : std::make_shared<const RawFeatures>(raw_dim, 0.0);
  item.time = time;
  item.cid3 = kNullCategory;
  item.padding = true;
  return item;
}

bool operator==(const ItemRecord& a, const ItemRecord& b) {
  const bool raw_equal = (a.raw == b.raw) || (a.raw && b.raw && *a.raw == *b.raw);
  return raw_equal && a.time == b.time && a.cid3 == b.cid3 && a.item_id == b.item_id &&
         a.padding == b.padding;
}

void Dataset::add(Sample s) {
  if (s.label == 1) {
    positives_.push_back(std::move(s));
  } else if (s.label == 0) {
    negatives_.push_back(std::move(s));
  } else {
    throw ValidationError("label must be 0 or 1, got " + std::to_string(s.label));
  }
}

std::optional<double> Dataset::ctr() const {
  if (empty()) return std::nullopt;
  return static_cast<double>(positives_.size()) / static_cast<double>(size());
}

namespace {

void validate_item(const ItemRecord& item, const DatasetInfo& info, const char* where) {
  if (!item.raw || item.raw->size() != info.raw_dim) {
    throw ValidationError(std::string(where) + ": raw feature vector must have " +
                          std::to_string(info.raw_dim) + " values, got " +
                          std::to_string(item.raw ? item.raw->size() : 0));
  }
  if (item.cid3 >= info.category_vocab) {
    throw ValidationError(std::string(where) + ": cid3 " + std::to_string(item.cid3) +
                          " outside vocabulary of size " + std::to_string(info.category_vocab));
  }
  if (!in_range(item.time)) throw ValidationError(std::string(where) + ": time index out of range");
}

}  // namespace

void validate_sample(const Sample& s, const DatasetInfo& info) {
  if (s.label != 0 && s.label != 1) {
    throw ValidationError("label must be 0 or 1, got " + std::to_string(s.label));
  }
  if (s.history.size() != info.history_length) {
    throw ValidationError("history must contain " + std::to_string(info.history_length) + " items, got " +
                          std::to_string(s.history.size()));
  }
  if (s.aux.size() != info.aux_dim) {
    throw ValidationError("aux must have " + std::to_string(info.aux_dim) + " values, got " +
                          std::to_string(s.aux.size()));
  }
  validate_item(s.target, info, "target");
  const ItemRecord* previous = nullptr;
  for (std::size_t l = 0; l < s.history.size(); ++l) {
    const ItemRecord& item = s.history[l];
    validate_item(item, info, "history item");
    if (item.time.absolute > s.target.time.absolute) {
      throw ValidationError("history item " + std::to_string(l) + " is later than the target exposure");
    }
    if (item.padding) {
      if (previous != nullptr) throw ValidationError("padding items must precede real history items");
      continue;
    }
    if (previous != nullptr && item.time.absolute < previous->time.absolute) {
      throw ValidationError("history is not in ascending click-time order");
    }
    previous = &item;
  }
}

}  // namespace tact
