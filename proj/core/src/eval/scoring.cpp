#include "tact/eval/scoring.hpp"

#include "tact/eval/metrics.hpp"

namespace tact {

ScoredDataset score_dataset(const Network& net, const Dataset& ds) {
  ScoredDataset out;
  out.scores.reserve(ds.size());
  out.labels.reserve(ds.size());
  out.categories.reserve(ds.size());
  ds.for_each([&](const Sample& s) {
    out.scores.push_back(net.score(s));
    out.labels.push_back(s.label);
    out.categories.push_back(s.target.cid3);
  });
  return out;
}

double dataset_auc(const Network& net, const Dataset& ds) {
  const ScoredDataset scored = score_dataset(net, ds);
  return auc(scored.scores, scored.labels);
}

}  // namespace tact
