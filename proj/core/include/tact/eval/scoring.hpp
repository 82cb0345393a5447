#pragma once

#include <cstdint>
#include <vector>

#include "tact/data/sample.hpp"
#include "tact/model/network.hpp"

namespace tact {

/// Scores of a whole dataset, positives first.
struct ScoredDataset {
  std::vector<double> scores;
  std::vector<int> labels;
  std::vector<std::uint32_t> categories;  ///< target cid3
};

ScoredDataset score_dataset(const Network& net, const Dataset& ds);

/// Test AUC of `net` on `ds`.
double dataset_auc(const Network& net, const Dataset& ds);

}  // namespace tact
