#include "tact/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "tact/error.hpp"

namespace tact {

double auc(std::span<const double> positive_scores, std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty()) {
    throw ContractError("AUC needs at least one positive and one negative");
  }
  std::vector<double> neg(negative_scores.begin(), negative_scores.end());
  std::sort(neg.begin(), neg.end());
  double wins = 0.0;
  for (double s : positive_scores) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), s);
    const auto hi = std::upper_bound(lo, neg.end(), s);
    wins += static_cast<double>(lo - neg.begin()) + 0.5 * static_cast<double>(hi - lo);
  }
  return wins / (static_cast<double>(positive_scores.size()) * static_cast<double>(neg.size()));
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ContractError("AUC: scores and labels differ in length");
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) {
      pos.push_back(scores[i]);
    } else if (labels[i] == 0) {
      neg.push_back(scores[i]);
    } else {
      throw ValidationError("AUC: label " + std::to_string(labels[i]) + " is not binary");
    }
  }
  return auc(pos, neg);
}

double rela_impr(double auc_measured, double auc_base) {
  if (auc_base == 0.5) throw ContractError("RelaImpr is undefined for a base AUC of 0.5");
  return ((auc_measured - 0.5) / (auc_base - 0.5) - 1.0) * 100.0;
}

namespace {

// Pairs tied within runs of equal keys, n(n-1)/2 summed over runs of a sorted sequence.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq equal) {
  std::uint64_t total = 0, run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Stable merge sort counting inversions (strictly decreasing pairs).
std::uint64_t count_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_swaps(v, buf, lo, mid) + count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("Kendall tau: rankings differ in length");
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x] != a[y] ? a[x] < a[y] : b[x] < b[y];
  });
  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t n1 = tied_pairs(n, [&](std::size_t i, std::size_t j) { return a[order[i]] == a[order[j]]; });
  const std::uint64_t n3 = tied_pairs(n, [&](std::size_t i, std::size_t j) {
    return a[order[i]] == a[order[j]] && b[order[i]] == b[order[j]];
  });
  std::vector<double> bs(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = b[order[i]];
  const std::uint64_t swaps = count_swaps(bs, buf, 0, n);
  const std::uint64_t n2 = tied_pairs(n, [&](std::size_t i, std::size_t j) { return bs[i] == bs[j]; });

  const double denom = std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
  if (denom == 0.0) return 0.0;
  const double numer = static_cast<double>(n0) - static_cast<double>(n1) - static_cast<double>(n2) +
                       static_cast<double>(n3) - 2.0 * static_cast<double>(swaps);
  return numer / denom;
}

TauSample tau_diagnostic(const std::vector<std::vector<double>>& scores,
                         const std::vector<std::vector<double>>& penalties, Rng& rng) {
  if (scores.size() != penalties.size()) throw ContractError("tau diagnostic: mismatched candidate sets");
  TauSample out;
  if (scores.empty()) return out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& s = scores[i];
    std::vector<double> neg_penalty(penalties[i].size());
    for (std::size_t k = 0; k < neg_penalty.size(); ++k) neg_penalty[k] = -penalties[i][k];
    std::vector<double> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0.0);
    shuffle_in_place(perm, rng);
    out.tau += kendall_tau(s, neg_penalty);
    out.tau_random += kendall_tau(s, perm);
  }
  out.tau /= static_cast<double>(scores.size());
  out.tau_random /= static_cast<double>(scores.size());
  return out;
}

}  // namespace tact
