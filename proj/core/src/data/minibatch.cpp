#include "tact/data/minibatch.hpp"

#include <algorithm>
#include <numeric>

#include "tact/error.hpp"
#include "tact/numeric/random.hpp"

namespace tact {

MinibatchIterator::MinibatchIterator(std::size_t count, std::size_t batch_size, std::uint64_t seed)
    : count_(count), batch_size_(batch_size), seed_(seed) {
  if (batch_size_ == 0) throw ContractError("batch size must be at least 1");
  if (count_ == 0) throw ContractError("cannot iterate over an empty set of positives");
  current_ = epoch_batches(0);
}

std::size_t MinibatchIterator::batches_per_epoch() const { return (count_ + batch_size_ - 1) / batch_size_; }

std::vector<std::vector<std::size_t>> MinibatchIterator::epoch_batches(std::size_t epoch) const {
  std::vector<std::size_t> order(count_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(stream_seed(seed_, epoch));
  shuffle_in_place(order, rng);

  std::vector<std::vector<std::size_t>> batches;
  batches.reserve(batches_per_epoch());
  for (std::size_t start = 0; start < count_; start += batch_size_) {
    const std::size_t end = std::min(count_, start + batch_size_);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

const std::vector<std::size_t>& MinibatchIterator::next() {
  if (cursor_ == current_.size()) {
    ++epoch_;
    current_ = epoch_batches(epoch_);
    cursor_ = 0;
  }
  return current_[cursor_++];
}

}  // namespace tact
