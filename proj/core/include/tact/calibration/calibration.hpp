#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace tact {

/// Elementwise sigmoid, mapping raw scores into [0, 1].
std::vector<double> normalize_scores(std::span<const double> scores);

/// Bucket index j of σ for n equal buckets [j/n, (j+1)/n); the last bucket is closed at 1.
std::size_t bucket_index(double sigma, std::size_t n);

struct BucketRates {
  std::vector<double> rates;            ///< positive fraction, NaN for empty buckets
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> positives;

  bool empty(std::size_t j) const { return counts[j] == 0; }
};

/// Per-bucket positive rate. Throws ContractError for n == 0 or σ outside [0, 1].
BucketRates empirical_bucket_rates(std::span<const double> sigma, std::span<const int> labels, std::size_t n);

/// Weighted isotonic regression by pool-adjacent-violators. Entries with
/// weight 0 do not influence the fit; afterwards they take the value of the
/// nearest fitted entry to their left (to their right at the leading edge).
/// Throws ContractError for negative weights or when every weight is 0.
std::vector<double> pava_fit(std::span<const double> values, std::span<const double> weights);

/// p_j + ε (j - 1) / (n - 1) for j = 1..n; a single bucket is returned as is.
/// Throws ContractError for ε <= 0 or a decreasing input.
std::vector<double> strictify(std::span<const double> rates, double epsilon);

struct CalibrationModel {
  std::size_t n = 0;
  double epsilon = 0.1;
  std::vector<double> rates;   ///< strictified rates used for calibration
  std::vector<double> fitted;  ///< isotonic fit before strictification

  bool fitted_model() const { return n > 0 && rates.size() == n; }
};

/// Buckets, PAVA and strictification in one step.
CalibrationModel fit_calibration(std::span<const double> sigma, std::span<const int> labels, std::size_t n,
                                 double epsilon);

/// α p(v_j) + (1 - α) p(v_{j+1}) with α = (v_{j+1} - σ̂) / (v_{j+1} - v_j); the
/// last bucket returns p(v_n). The result is clamped to [0, 1].
/// Throws ContractError for an unfitted model or σ̂ outside [0, 1].
double calibrate_sample(double sigma, const CalibrationModel& model);

/// Mean calibrated CTR, optionally restricted to samples whose category equals
/// `only_category`. Throws ValidationError when nothing is selected.
double calibrate_dataset(std::span<const double> sigma, const CalibrationModel& model,
                         std::span<const std::uint32_t> categories = {},
                         std::optional<std::uint32_t> only_category = std::nullopt);

/// {"n":..,"epsilon":..,"rates":[..],"fitted":[..]}
void save_calibration(std::ostream& out, const CalibrationModel& model);
void save_calibration(const std::filesystem::path& path, const CalibrationModel& model);
CalibrationModel load_calibration(std::istream& in);
CalibrationModel load_calibration(const std::filesystem::path& path);

}  // namespace tact
