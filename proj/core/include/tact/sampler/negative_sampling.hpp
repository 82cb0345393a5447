#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tact/data/sample.hpp"
#include "tact/numeric/random.hpp"

namespace tact {

/// Index of one uniformly drawn negative; a single rng draw (none for a pool of one).
/// Throws ContractError for an empty pool.
std::size_t uniform_sample_index(std::size_t pool_size, Rng& rng);
const Sample& uniform_sample(std::span<const Sample> negatives, Rng& rng);

struct UnderSampleResult {
  Dataset data;
  bool insufficient = false;  ///< fewer than ratio * |positives| negatives; all were kept
};

/// All positives plus ratio * |positives| negatives drawn without replacement.
UnderSampleResult under_sample_build(const Dataset& ds, std::size_t ratio, Rng& rng);

/// Negatives grouped by user.
class UserIndex {
 public:
  explicit UserIndex(std::span<const Sample> negatives);

  /// Indices of the user's negatives; empty when the user has none.
  std::span<const std::size_t> of(std::uint64_t user) const;
  std::size_t pool_size() const { return pool_size_; }

 private:
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_user_;
  std::size_t pool_size_ = 0;
};

/// Uniform negative among the positive's own user, else a global uniform draw.
std::size_t user_fixed_sample(const Sample& positive, const UserIndex& index, Rng& rng);

/// Distinct catalog items of a dataset (targets and history items).
class ItemCatalog {
 public:
  explicit ItemCatalog(const Dataset& ds);

  std::size_t size() const { return items_.size(); }
  const ItemRecord& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::vector<ItemRecord> items_;
};

/// The positive's user part with its target swapped for a uniformly drawn item
/// the user has not interacted with; exposure time is kept and the label is 0.
Sample make_nonpositive(const Sample& positive, const ItemCatalog& catalog, Rng& rng);

}  // namespace tact
