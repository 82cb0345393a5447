#pragma once

#include <span>
#include <vector>

#include "tact/numeric/random.hpp"

namespace tact {

/// P(score_pos > score_neg) with ties counted 1/2, via ranks in O(n log n).
/// Throws ContractError unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);
double auc(std::span<const double> positive_scores, std::span<const double> negative_scores);

/// ((auc_measured - 0.5) / (auc_base - 0.5) - 1) * 100. Throws ContractError for auc_base == 0.5.
double rela_impr(double auc_measured, double auc_base);

/// Kendall tau-b between two rankings given as per-element keys (higher key
/// ranks first; only the order matters). Computed in O(n log n). Returns 0
/// when either ranking is entirely tied. Throws ContractError on length mismatch.
double kendall_tau(std::span<const double> a, std::span<const double> b);

struct TauSample {
  double tau = 0.0;         ///< score ranking vs negative-penalty ranking
  double tau_random = 0.0;  ///< score ranking vs a random permutation
};

/// Per candidate set: scores[k] = f_D(s'_k), penalties[k] = p(s, s'_k). The
/// score ranking is compared with the ranking by -penalty and with a random
/// permutation drawn from `rng`. Results are averaged over candidate sets.
TauSample tau_diagnostic(const std::vector<std::vector<double>>& scores,
                         const std::vector<std::vector<double>>& penalties, Rng& rng);

}  // namespace tact
