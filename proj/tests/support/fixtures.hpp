#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tact/data/sample.hpp"
#include "tact/model/config.hpp"
#include "tact/numeric/random.hpp"

namespace tact::testing {

/// Small model used by gradient and property tests.
inline ModelConfig toy_config(std::size_t L = 4) {
  ModelConfig c;
  c.raw_dim = 6;
  c.category_vocab = 5;
  c.onehot_dim = 3;
  c.ff_width = 10;
  c.item_dim = 16;
  c.hidden_dim = 8;
  c.attention_dim = 8;
  c.aux_in = 3;
  c.aux_dim = 4;
  c.history_length = L;
  return c;
}

inline ItemRecord random_item(Rng& rng, const ModelConfig& c, std::int64_t t) {
  auto raw = std::make_shared<RawFeatures>(c.raw_dim);
  for (double& v : *raw) v = standard_normal(rng);
  ItemRecord item;
  item.raw = raw;
  item.time = decompose_timestamp(t);
  item.cid3 = static_cast<std::uint32_t>(uniform_index(rng, c.category_vocab));
  return item;
}

/// History clicks spaced by up to a day before a target exposed at `t0`.
inline Sample random_sample(Rng& rng, const ModelConfig& c, std::int64_t t0 = 1530403200 + 86400 * 3) {
  Sample s;
  s.user = uniform_index(rng, 100);
  s.target = random_item(rng, c, t0);
  std::vector<std::int64_t> times(c.history_length);
  std::int64_t t = t0;
  for (std::size_t k = 0; k < c.history_length; ++k) {
    t -= 60 + static_cast<std::int64_t>(uniform_index(rng, 86400));
    times[c.history_length - 1 - k] = t;
  }
  for (std::int64_t ti : times) s.history.push_back(random_item(rng, c, ti));
  s.aux.resize(c.aux_in);
  for (double& v : s.aux) v = standard_normal(rng);
  s.label = static_cast<int>(uniform_index(rng, 2));
  return s;
}

}  // namespace tact::testing
