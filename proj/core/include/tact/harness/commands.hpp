#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tact/calibration/calibration.hpp"
#include "tact/harness/run_config.hpp"

namespace tact {

/// Name of the environment variable holding the default output root.
inline constexpr const char* kOutputRootEnv = "TACT_OUTPUT_ROOT";

/// $TACT_OUTPUT_ROOT, or "runs" when unset or empty.
std::filesystem::path output_root_from_env();

struct RunOptions {
  std::filesystem::path output_root = "runs";
  /// Subdirectory of output_root; derived from the command and config when empty.
  std::string run_name;
  /// Allow writing into a non-empty run directory.
  bool force = false;
  /// Progress lines, one per epoch; null for silence.
  std::ostream* log = nullptr;
};

/// Resolves and creates the run directory. Throws Error when it already holds
/// files and `force` is not set.
std::filesystem::path prepare_run_dir(const RunOptions& options, const std::string& command,
                                      const KeyValueConfig& resolved);

struct SynthesizeReport {
  std::filesystem::path dir;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
};

/// Writes train.jsonl, test.jsonl, truth.csv, synthetic.resolved and config.resolved.
SynthesizeReport cmd_synthesize(const RunConfig& config, const RunOptions& options);

struct CalibrationReport {
  std::size_t buckets = 0;
  double epsilon = 0.0;
  CalibrationFit fit_on = CalibrationFit::Train;
  std::size_t fit_samples = 0;
  std::size_t applied_samples = 0;
  double empirical_ctr = 0.0;   ///< of the samples the model is applied to
  double calibrated_ctr = 0.0;  ///< mean calibrated CTR over the same samples
  double relative_error = 0.0;  ///< |calibrated - empirical| / empirical
};

struct TrainReport {
  std::filesystem::path dir;
  std::string model_config_hash;
  std::optional<double> final_test_auc;
  std::optional<double> best_test_auc;
  std::size_t best_epoch = 0;
  std::optional<double> rela_impr_pct;  ///< against baseline_run, when given
  CalibrationReport calibration;
};

/// Trains one model and writes config.resolved, metrics.csv, epochs.csv,
/// checkpoint_final.json, checkpoint_best.json, generator_final.json (adversarial
/// samplers), calibration.json and summary.json.
TrainReport cmd_train(const RunConfig& config, const RunOptions& options);
/// Same, on data already in memory, into an existing directory.
TrainReport train_into(const RunConfig& config, const RunData& data, const std::filesystem::path& dir,
                       std::ostream* log = nullptr);

struct EvalReport {
  std::filesystem::path dir;
  double auc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::optional<double> rela_impr_pct;
};

/// AUC of a checkpoint on the test data (the training data when no test set
/// is configured). Writes config.resolved and summary.json.
EvalReport cmd_eval(const RunConfig& config, const RunOptions& options, const std::filesystem::path& checkpoint);

struct CategoryCalibration {
  std::uint32_t cid3 = 0;
  std::size_t samples = 0;
  std::size_t positives = 0;
  double empirical_ctr = 0.0;
  double calibrated_ctr = 0.0;
};

struct CalibrateReport {
  std::filesystem::path dir;
  std::vector<CalibrationReport> sweep;  ///< one entry per bucket count
  std::vector<CategoryCalibration> categories;
};

/// Fits calibration on the scores of a checkpoint for every bucket count in
/// `bucket_sweep` (the configured calibration_buckets when empty). Writes
/// calibration.json for calibration_buckets, calibration_sweep.csv,
/// calibration_categories.csv, config.resolved and summary.json.
CalibrateReport cmd_calibrate(const RunConfig& config, const RunOptions& options,
                              const std::filesystem::path& checkpoint, std::vector<std::size_t> bucket_sweep);

/// Calibration of precomputed scores: fit on (fit_scores, fit_labels), apply to
/// (apply_scores, apply_labels).
CalibrationReport calibration_report(const std::vector<double>& fit_scores, const std::vector<int>& fit_labels,
                                     const std::vector<double>& apply_scores, const std::vector<int>& apply_labels,
                                     std::size_t buckets, double epsilon, CalibrationModel* model = nullptr);

enum class SweepAxis { Candidates, Temperature };

std::string_view sweep_axis_name(SweepAxis axis);
/// Accepts "candidates"/"C" and "temperature"/"T0".
SweepAxis parse_sweep_axis(std::string_view name);

struct SweepRow {
  double value = 0.0;
  std::vector<double> final_aucs;  ///< one per seed
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation, 0 for one seed
};

struct SweepReport {
  std::filesystem::path dir;
  std::vector<SweepRow> rows;
};

/// One training run per (value, seed) under <dir>/<axis>_<value>/seed_<seed>,
/// summarized in sweep.csv with one row per value.
SweepReport cmd_sweep(const RunConfig& config, const RunOptions& options, SweepAxis axis,
                      const std::vector<double>& values, const std::vector<std::uint64_t>& seeds);

}  // namespace tact
