#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tact {

/// Endless stream of index batches over `count` items (the positives of a
/// dataset). Each epoch is an independent shuffle seeded by (seed, epoch);
/// an epoch yields full batches followed by one ragged tail when
/// count % batch_size != 0.
class MinibatchIterator {
 public:
  MinibatchIterator(std::size_t count, std::size_t batch_size, std::uint64_t seed);

  /// All batches of one epoch, in order.
  std::vector<std::vector<std::size_t>> epoch_batches(std::size_t epoch) const;

  /// Next batch of the stream, moving on to the next epoch when exhausted.
  const std::vector<std::size_t>& next();

  /// Epoch of the batch most recently returned by next().
  std::size_t epoch() const { return epoch_; }
  std::size_t batch_size() const { return batch_size_; }
  std::size_t batches_per_epoch() const;

 private:
  std::size_t count_;
  std::size_t batch_size_;
  std::uint64_t seed_;
  std::size_t epoch_ = 0;
  std::size_t cursor_ = 0;
  std::vector<std::vector<std::size_t>> current_;
};

}  // namespace tact
