#include "tact/numeric/random.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

#include "tact/error.hpp"

namespace tact {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw ContractError("uniform_index over an empty range");
  if (n == 1) return 0;
  // Rejection below 2^64 mod n keeps the draw unbiased.
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t threshold = (0 - range) % range;
  std::uint64_t x = rng();
  while (x < threshold) x = rng();
  return static_cast<std::size_t>(x % range);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw ContractError("cannot draw " + std::to_string(k) + " of " + std::to_string(n));
  std::vector<std::size_t> out;
  out.reserve(k);
  std::unordered_set<std::size_t> taken;
  for (std::size_t j = n - k; j < n; ++j) {
    const std::size_t t = uniform_index(rng, j + 1);
    const std::size_t pick = taken.contains(t) ? j : t;
    taken.insert(pick);
    out.push_back(pick);
  }
  return out;
}

void glorot_uniform(Parameter& p, Rng& rng) {
  const Shape& s = p.value.shape();
  if (s.rank() < 2) {
    p.value.fill(0.0);
    return;
  }
  const double fan_out = static_cast<double>(s[0]);
  const double fan_in = static_cast<double>(s.elements() / s[0]);
  const double a = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : p.value.values()) v = (2.0 * uniform01(rng) - 1.0) * a;
}

}  // namespace tact
