#include "tact/sampler/negative_sampling.hpp"

#include <algorithm>
#include <map>

#include "tact/error.hpp"

namespace tact {

std::size_t uniform_sample_index(std::size_t pool_size, Rng& rng) {
  if (pool_size == 0) throw ContractError("cannot sample from an empty negative pool");
  return uniform_index(rng, pool_size);
}

const Sample& uniform_sample(std::span<const Sample> negatives, Rng& rng) {
  return negatives[uniform_sample_index(negatives.size(), rng)];
}

UnderSampleResult under_sample_build(const Dataset& ds, std::size_t ratio, Rng& rng) {
  if (ratio == 0) throw ConfigError("under-sampling ratio must be positive");
  UnderSampleResult out;
  out.data = Dataset(ds.info());
  for (const Sample& s : ds.positives()) out.data.add(s);
  const std::size_t want = ratio * ds.positives().size();
  const auto& neg = ds.negatives();
  if (neg.size() < want) {
    out.insufficient = true;
    for (const Sample& s : neg) out.data.add(s);
    return out;
  }
  std::vector<std::size_t> picks = sample_without_replacement(rng, neg.size(), want);
  std::sort(picks.begin(), picks.end());
  for (std::size_t i : picks) out.data.add(neg[i]);
  return out;
}

UserIndex::UserIndex(std::span<const Sample> negatives) : pool_size_(negatives.size()) {
  for (std::size_t i = 0; i < negatives.size(); ++i) by_user_[negatives[i].user].push_back(i);
}

std::span<const std::size_t> UserIndex::of(std::uint64_t user) const {
  const auto it = by_user_.find(user);
  if (it == by_user_.end()) return {};
  return it->second;
}

std::size_t user_fixed_sample(const Sample& positive, const UserIndex& index, Rng& rng) {
  const auto own = index.of(positive.user);
  if (!own.empty()) return own[uniform_index(rng, own.size())];
  return uniform_sample_index(index.pool_size(), rng);
}

namespace {

// Identity of a catalog item: its id when known, otherwise its feature vector.
struct ItemKey {
  std::int64_t id;
  const RawFeatures* raw;
  std::uint32_t cid3;
  auto operator<=>(const ItemKey&) const = default;
};

ItemKey key_of(const ItemRecord& item) {
  if (item.item_id >= 0) return {item.item_id, nullptr, 0};
  return {-1, item.raw.get(), item.cid3};
}

}  // namespace

ItemCatalog::ItemCatalog(const Dataset& ds) {
  std::map<ItemKey, std::size_t> seen;
  auto visit = [&](const ItemRecord& item) {
    if (item.padding) return;
    if (seen.emplace(key_of(item), items_.size()).second) items_.push_back(item);
  };
  ds.for_each([&](const Sample& s) {
    visit(s.target);
    for (const ItemRecord& h : s.history) visit(h);
  });
}

Sample make_nonpositive(const Sample& positive, const ItemCatalog& catalog, Rng& rng) {
  if (catalog.size() == 0) throw ContractError("cannot construct a nonpositive from an empty catalog");
  auto interacted = [&](const ItemRecord& item) {
    const ItemKey k = key_of(item);
    if (k == key_of(positive.target)) return true;
    return std::any_of(positive.history.begin(), positive.history.end(),
                       [&](const ItemRecord& h) { return !h.padding && key_of(h) == k; });
  };
  std::size_t pick = uniform_index(rng, catalog.size());
  for (int attempt = 0; attempt < 64 && interacted(catalog[pick]); ++attempt) pick = uniform_index(rng, catalog.size());
  Sample out = positive;
  out.target = catalog[pick];
  out.target.time = positive.target.time;
  out.label = 0;
  return out;
}

}  // namespace tact
