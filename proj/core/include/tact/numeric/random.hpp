#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "tact/numeric/tensor.hpp"

namespace tact {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a named sub-stream of a run seed.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

/// Uniform integer in [0, n). Consumes exactly one draw per call for n > 1
/// and none for n == 1.
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(Rng& rng);

/// Standard normal via Box-Muller (two draws).
double standard_normal(Rng& rng);

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

/// k distinct indices from [0, n), drawn with Floyd's algorithm, returned in
/// draw order. For k == 1 this is a single uniform_index(rng, n) draw.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

/// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)); rank-1 tensors are zeroed.
void glorot_uniform(Parameter& p, Rng& rng);

}  // namespace tact
