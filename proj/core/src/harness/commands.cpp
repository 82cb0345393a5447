#include "tact/harness/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tact/data/jsonl.hpp"
#include "tact/error.hpp"
#include "tact/eval/metrics.hpp"
#include "tact/eval/scoring.hpp"
#include "tact/model/checkpoint.hpp"

namespace tact {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string hex8(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex << std::setw(8) << std::setfill('0') << (h & 0xffffffffULL);
  return s.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string kv_text(const KeyValueConfig& kv) {
  std::ostringstream out;
  kv.write(out);
  return out.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

std::string field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json kv_json(const KeyValueConfig& kv) {
  Json j = Json::object();
  for (const auto& [key, value] : kv.entries()) j[key] = value;
  return j;
}

Json dataset_json(const Dataset& ds) {
  Json j;
  j["positives"] = ds.positives().size();
  j["negatives"] = ds.negatives().size();
  j["ctr"] = optional_json(ds.ctr());
  return j;
}

Json calibration_json(const CalibrationReport& r) {
  Json j;
  j["buckets"] = r.buckets;
  j["epsilon"] = r.epsilon;
  j["fit_on"] = std::string(calibration_fit_name(r.fit_on));
  j["fit_samples"] = r.fit_samples;
  j["applied_samples"] = r.applied_samples;
  j["empirical_ctr"] = r.empirical_ctr;
  j["calibrated_ctr"] = r.calibrated_ctr;
  j["relative_error"] = number_or_null(r.relative_error);
  return j;
}

/// Final test AUC recorded in a previous run directory (or its summary file).
double baseline_auc(const fs::path& run) {
  const fs::path file = fs::is_directory(run) ? run / "summary.json" : run;
  std::ifstream in(file);
  if (!in) throw Error("cannot read baseline run summary " + file.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed baseline summary " + file.string() + ": " + e.what());
  }
  for (const char* key : {"final_test_auc", "auc"}) {
    if (j.contains(key) && j[key].is_number()) return j[key].get<double>();
  }
  throw Error("baseline summary " + file.string() + " records no test AUC");
}

void add_baseline(Json& summary, const std::string& baseline_run, const std::optional<double>& auc,
                  std::optional<double>& rela) {
  if (baseline_run.empty()) return;
  const double base = baseline_auc(baseline_run);
  summary["baseline_run"] = baseline_run;
  summary["baseline_auc"] = base;
  if (auc) rela = rela_impr(*auc, base);
  summary["rela_impr_pct"] = optional_json(rela);
}

void write_resolved(const fs::path& dir, const RunConfig& config) { config.to_key_values().save(dir / "config.resolved"); }

void check_compatible(const ModelConfig& m, const DatasetInfo& info) {
  if (m.raw_dim != info.raw_dim || m.aux_in != info.aux_dim || m.history_length != info.history_length ||
      m.category_vocab < info.category_vocab) {
    throw ValidationError("checkpoint model (raw " + std::to_string(m.raw_dim) + ", aux " + std::to_string(m.aux_in) +
                          ", L " + std::to_string(m.history_length) + ", vocab " + std::to_string(m.category_vocab) +
                          ") does not fit the data (raw " + std::to_string(info.raw_dim) + ", aux " +
                          std::to_string(info.aux_dim) + ", L " + std::to_string(info.history_length) + ", vocab " +
                          std::to_string(info.category_vocab) + ")");
  }
}

const Dataset& fit_split(const RunConfig& config, const RunData& data) {
  if (config.calibration_fit == CalibrationFit::Test) {
    if (!data.test) throw ConfigError("calibration_fit = test needs test data");
    return *data.test;
  }
  return data.train;
}

const Dataset& apply_split(const RunData& data) { return data.test ? *data.test : data.train; }

const char* kStepHeader = "epoch,step,d_loss,g_surrogate,mean_reward,baseline,temperature,train_auc_snapshot\n";
const char* kEpochHeader = "epoch,test_auc,d_loss,mean_reward,tau,tau_random,train_auc_snapshot\n";

void write_step(std::ostream& out, const StepMetrics& r) {
  out << r.epoch << ',' << r.step << ',' << format_double(r.d_loss) << ',' << field(r.g_surrogate) << ','
      << field(r.mean_reward) << ',' << field(r.baseline) << ',' << field(r.temperature) << ','
      << format_double(r.train_auc_snapshot) << '\n';
}

void write_epoch(std::ostream& out, const EpochMetrics& e) {
  out << e.epoch << ',' << field(e.test_auc) << ',' << format_double(e.d_loss) << ',' << field(e.mean_reward) << ','
      << field(e.tau) << ',' << field(e.tau_random) << ',' << format_double(e.train_auc_snapshot) << '\n';
}

void write_truth(std::ostream& out, const char* split, const SplitTruth& truth) {
  std::size_t row = 0;
  auto emit = [&](const std::vector<GroundTruth>& v, int label) {
    for (const GroundTruth& t : v) {
      out << split << ',' << row++ << ',' << label << ',' << format_double(t.logit) << ','
          << format_double(t.periodic) << '\n';
    }
  };
  emit(truth.positives, 1);
  emit(truth.negatives, 0);
}

std::string value_label(double v) {
  std::string s = format_double(v);
  for (char& c : s) {
    if (c == '-') c = 'm';
  }
  return s;
}

}  // namespace

fs::path output_root_from_env() {
  const char* v = std::getenv(kOutputRootEnv);
  return (v != nullptr && *v != '\0') ? fs::path(v) : fs::path("runs");
}

fs::path prepare_run_dir(const RunOptions& options, const std::string& command, const KeyValueConfig& resolved) {
  const std::string name =
      options.run_name.empty() ? command + "-" + hex8(fnv1a(command + "\n" + kv_text(resolved))) : options.run_name;
  const fs::path dir = options.output_root / name;
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw Error(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir) && !options.force) {
      throw Error("run directory " + dir.string() + " is not empty; pass --force to overwrite");
    }
  }
  fs::create_directories(dir);
  return dir;
}

SynthesizeReport cmd_synthesize(const RunConfig& config, const RunOptions& options) {
  config.validate();
  RunConfig synth = config;
  synth.train_data.clear();
  synth.test_data.clear();
  const RunData data = load_run_data(synth);

  SynthesizeReport report;
  report.dir = prepare_run_dir(options, "synthesize", synth.to_key_values());
  write_resolved(report.dir, synth);
  SyntheticConfig sc = synth.synthetic;
  sc.history_length = synth.history_length;
  sc.to_key_values().save(report.dir / "synthetic.resolved");
  write_jsonl(report.dir / "train.jsonl", data.train);
  write_jsonl(report.dir / "test.jsonl", *data.test);
  {
    std::ofstream out = open_out(report.dir / "truth.csv");
    out << "split,row,label,logit,periodic\n";
    write_truth(out, "train", *data.train_truth);
    write_truth(out, "test", *data.test_truth);
  }
  report.train_samples = data.train.size();
  report.test_samples = data.test->size();
  if (options.log) {
    *options.log << "wrote " << report.train_samples << " train and " << report.test_samples << " test samples to "
                 << report.dir.string() << '\n';
  }
  return report;
}

CalibrationReport calibration_report(const std::vector<double>& fit_scores, const std::vector<int>& fit_labels,
                                     const std::vector<double>& apply_scores, const std::vector<int>& apply_labels,
                                     std::size_t buckets, double epsilon, CalibrationModel* model) {
  if (apply_scores.empty()) throw ValidationError("no samples to calibrate");
  CalibrationModel m = fit_calibration(normalize_scores(fit_scores), fit_labels, buckets, epsilon);
  CalibrationReport r;
  r.buckets = buckets;
  r.epsilon = epsilon;
  r.fit_samples = fit_scores.size();
  r.applied_samples = apply_scores.size();
  double positives = 0.0;
  for (int y : apply_labels) positives += y;
  r.empirical_ctr = positives / static_cast<double>(apply_labels.size());
  r.calibrated_ctr = calibrate_dataset(normalize_scores(apply_scores), m);
  r.relative_error = r.empirical_ctr > 0.0 ? std::abs(r.calibrated_ctr - r.empirical_ctr) / r.empirical_ctr
                                           : std::numeric_limits<double>::quiet_NaN();
  if (model) *model = std::move(m);
  return r;
}

TrainReport train_into(const RunConfig& config, const RunData& data, const fs::path& dir, std::ostream* log) {
  config.validate();
  const ModelConfig model = model_config_for(config, data.info());
  write_resolved(dir, config);

  std::ofstream steps = open_out(dir / "metrics.csv");
  std::ofstream epochs = open_out(dir / "epochs.csv");
  steps << kStepHeader;
  epochs << kEpochHeader;
  const std::size_t total = config.train.epochs;
  auto on_epoch = [&](const EpochMetrics& e, const std::vector<StepMetrics>& rows) {
    for (const StepMetrics& r : rows) write_step(steps, r);
    write_epoch(epochs, e);
    steps.flush();
    epochs.flush();
    if (log) {
      *log << "epoch " << e.epoch << '/' << total << " d_loss " << format_double(e.d_loss) << " snapshot_auc "
           << format_double(e.train_auc_snapshot);
      if (e.test_auc) *log << " test_auc " << format_double(*e.test_auc);
      if (e.mean_reward) *log << " mean_reward " << format_double(*e.mean_reward);
      *log << std::endl;
    }
  };
  const Dataset* test = data.test ? &*data.test : nullptr;
  TrainResult result = adversarial_train(data.train, test, model, config.train, on_epoch);

  save_checkpoint(dir / "checkpoint_final.json", result.discriminator);
  save_checkpoint(dir / "checkpoint_best.json", result.best);
  if (result.generator) save_checkpoint(dir / "generator_final.json", *result.generator);

  TrainReport report;
  report.dir = dir;
  report.model_config_hash = model.hash_hex();
  report.final_test_auc = result.final_test_auc;
  report.best_test_auc = result.best_test_auc;
  report.best_epoch = result.best_epoch;

  const Dataset& fit = fit_split(config, data);
  const ScoredDataset fit_scored = score_dataset(result.discriminator, fit);
  const Dataset& apply = apply_split(data);
  const ScoredDataset apply_scored = &apply == &fit ? fit_scored : score_dataset(result.discriminator, apply);
  CalibrationModel cal;
  report.calibration = calibration_report(fit_scored.scores, fit_scored.labels, apply_scored.scores,
                                          apply_scored.labels, config.calibration_buckets,
                                          config.calibration_epsilon, &cal);
  report.calibration.fit_on = config.calibration_fit;
  save_calibration(dir / "calibration.json", cal);

  Json summary;
  summary["command"] = "train";
  summary["sampler"] = std::string(sampler_name(config.train.sampler));
  summary["seed"] = config.train.seed;
  summary["model_config_hash"] = report.model_config_hash;
  summary["model_config"] = kv_json(model.to_key_values());
  summary["train_data"] = dataset_json(data.train);
  summary["test_data"] = data.test ? dataset_json(*data.test) : Json(nullptr);
  summary["epochs"] = config.train.epochs;
  summary["steps_per_epoch"] = config.train.steps_per_epoch;
  summary["batch_size"] = result.batch_size;
  summary["insufficient_negatives"] = result.insufficient_negatives;
  summary["final_test_auc"] = optional_json(result.final_test_auc);
  summary["best_test_auc"] = optional_json(result.best_test_auc);
  summary["best_epoch"] = result.best_epoch;
  add_baseline(summary, config.baseline_run, result.final_test_auc, report.rela_impr_pct);
  summary["calibration"] = calibration_json(report.calibration);
  write_json(dir / "summary.json", summary);
  if (log && result.insufficient_negatives) {
    *log << "warning: fewer negatives than the under-sampling ratio asks for; all negatives were kept" << std::endl;
  }
  return report;
}

TrainReport cmd_train(const RunConfig& config, const RunOptions& options) {
  config.validate();
  const RunData data = load_run_data(config);
  const fs::path dir = prepare_run_dir(options, "train", config.to_key_values());
  try {
    return train_into(config, data, dir, options.log);
  } catch (const Error& e) {
    throw Error("train run " + dir.string() + ": " + e.what());
  }
}

EvalReport cmd_eval(const RunConfig& config, const RunOptions& options, const fs::path& checkpoint) {
  config.validate();
  const Network net = load_checkpoint(checkpoint);
  const RunData data = load_run_data(config);
  check_compatible(net.config(), data.info());
  const Dataset& ds = apply_split(data);

  KeyValueConfig resolved = config.to_key_values();
  resolved.set("checkpoint", fs::absolute(checkpoint).lexically_normal().string());
  EvalReport report;
  report.dir = prepare_run_dir(options, "eval", resolved);
  resolved.save(report.dir / "config.resolved");
  report.auc = dataset_auc(net, ds);
  report.positives = ds.positives().size();
  report.negatives = ds.negatives().size();

  Json summary;
  summary["command"] = "eval";
  summary["checkpoint"] = resolved.get_string("checkpoint", "");
  summary["model_config_hash"] = net.config().hash_hex();
  summary["split"] = data.test ? "test" : "train";
  summary["data"] = dataset_json(ds);
  summary["auc"] = report.auc;
  add_baseline(summary, config.baseline_run, report.auc, report.rela_impr_pct);
  write_json(report.dir / "summary.json", summary);
  if (options.log) *options.log << "auc " << format_double(report.auc) << '\n';
  return report;
}

CalibrateReport cmd_calibrate(const RunConfig& config, const RunOptions& options, const fs::path& checkpoint,
                              std::vector<std::size_t> bucket_sweep) {
  config.validate();
  if (bucket_sweep.empty()) bucket_sweep.push_back(config.calibration_buckets);
  for (std::size_t n : bucket_sweep) {
    if (n == 0) throw ConfigError("bucket counts must be positive");
  }
  const Network net = load_checkpoint(checkpoint);
  const RunData data = load_run_data(config);
  check_compatible(net.config(), data.info());

  KeyValueConfig resolved = config.to_key_values();
  resolved.set("checkpoint", fs::absolute(checkpoint).lexically_normal().string());
  std::string sweep_text;
  for (std::size_t n : bucket_sweep) sweep_text += (sweep_text.empty() ? "" : ",") + std::to_string(n);
  resolved.set("bucket_sweep", sweep_text);

  CalibrateReport report;
  report.dir = prepare_run_dir(options, "calibrate", resolved);
  resolved.save(report.dir / "config.resolved");

  const Dataset& fit = fit_split(config, data);
  const Dataset& apply = apply_split(data);
  const ScoredDataset fit_scored = score_dataset(net, fit);
  const ScoredDataset apply_scored = &apply == &fit ? fit_scored : score_dataset(net, apply);

  std::ofstream sweep = open_out(report.dir / "calibration_sweep.csv");
  sweep << "buckets,epsilon,empirical_ctr,calibrated_ctr,relative_error\n";
  for (std::size_t n : bucket_sweep) {
    CalibrationReport r = calibration_report(fit_scored.scores, fit_scored.labels, apply_scored.scores,
                                             apply_scored.labels, n, config.calibration_epsilon);
    r.fit_on = config.calibration_fit;
    sweep << n << ',' << format_double(r.epsilon) << ',' << format_double(r.empirical_ctr) << ','
          << format_double(r.calibrated_ctr) << ','
          << (std::isfinite(r.relative_error) ? format_double(r.relative_error) : std::string()) << '\n';
    if (options.log) {
      *options.log << "buckets " << n << " calibrated " << format_double(r.calibrated_ctr) << " empirical "
                   << format_double(r.empirical_ctr) << " relative_error " << format_double(r.relative_error)
                   << '\n';
    }
    report.sweep.push_back(r);
  }

  CalibrationModel model;
  const CalibrationReport primary =
      calibration_report(fit_scored.scores, fit_scored.labels, apply_scored.scores, apply_scored.labels,
                         config.calibration_buckets, config.calibration_epsilon, &model);
  save_calibration(report.dir / "calibration.json", model);

  const std::vector<double> sigma = normalize_scores(apply_scored.scores);
  std::map<std::uint32_t, CategoryCalibration> by_cat;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    CategoryCalibration& c = by_cat[apply_scored.categories[i]];
    c.cid3 = apply_scored.categories[i];
    ++c.samples;
    c.positives += static_cast<std::size_t>(apply_scored.labels[i]);
  }
  std::ofstream cats = open_out(report.dir / "calibration_categories.csv");
  cats << "cid3,samples,positives,empirical_ctr,calibrated_ctr\n";
  for (auto& [cid3, c] : by_cat) {
    c.empirical_ctr = static_cast<double>(c.positives) / static_cast<double>(c.samples);
    c.calibrated_ctr = calibrate_dataset(sigma, model, apply_scored.categories, cid3);
    cats << cid3 << ',' << c.samples << ',' << c.positives << ',' << format_double(c.empirical_ctr) << ','
         << format_double(c.calibrated_ctr) << '\n';
    report.categories.push_back(c);
  }

  Json summary;
  summary["command"] = "calibrate";
  summary["checkpoint"] = resolved.get_string("checkpoint", "");
  summary["model_config_hash"] = net.config().hash_hex();
  summary["calibration"] = calibration_json(primary);
  Json rows = Json::array();
  for (const CalibrationReport& r : report.sweep) rows.push_back(calibration_json(r));
  summary["bucket_sweep"] = rows;
  write_json(report.dir / "summary.json", summary);
  return report;
}

std::string_view sweep_axis_name(SweepAxis axis) { return axis == SweepAxis::Candidates ? "candidates" : "temperature"; }

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "candidates" || name == "C") return SweepAxis::Candidates;
  if (name == "temperature" || name == "T0") return SweepAxis::Temperature;
  throw ConfigError("sweep axis must be 'candidates' (C) or 'temperature' (T0), got '" + std::string(name) + "'");
}

SweepReport cmd_sweep(const RunConfig& config, const RunOptions& options, SweepAxis axis,
                      const std::vector<double>& values, const std::vector<std::uint64_t>& seeds) {
  config.validate();
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  for (double v : values) {
    if (!(v > 0.0)) throw ConfigError("sweep values must be positive, got " + format_double(v));
    if (axis == SweepAxis::Candidates && v != std::floor(v)) {
      throw ConfigError("candidate counts must be integers, got " + format_double(v));
    }
  }
  const RunData data = load_run_data(config);
  if (!data.test) throw ConfigError("sweep needs test data");

  KeyValueConfig resolved = config.to_key_values();
  std::string text;
  for (double v : values) text += (text.empty() ? "" : ",") + format_double(v);
  resolved.set("sweep_axis", std::string(sweep_axis_name(axis)));
  resolved.set("sweep_values", text);
  text.clear();
  for (std::uint64_t s : seeds) text += (text.empty() ? "" : ",") + std::to_string(s);
  resolved.set("sweep_seeds", text);

  SweepReport report;
  report.dir = prepare_run_dir(options, "sweep", resolved);
  resolved.save(report.dir / "config.resolved");

  for (double v : values) {
    SweepRow row;
    row.value = v;
    for (std::uint64_t seed : seeds) {
      RunConfig run = config;
      if (axis == SweepAxis::Candidates) {
        run.train.candidates = static_cast<std::size_t>(v);
      } else {
        run.train.temperature = v;
      }
      run.train.seed = seed;
      const fs::path dir =
          report.dir / (std::string(sweep_axis_name(axis)) + "_" + value_label(v)) / ("seed_" + std::to_string(seed));
      fs::create_directories(dir);
      if (options.log) *options.log << sweep_axis_name(axis) << ' ' << format_double(v) << " seed " << seed << '\n';
      const TrainReport t = train_into(run, data, dir, options.log);
      row.final_aucs.push_back(*t.final_test_auc);
    }
    double sum = 0.0;
    for (double a : row.final_aucs) sum += a;
    row.mean = sum / static_cast<double>(row.final_aucs.size());
    if (row.final_aucs.size() > 1) {
      double ss = 0.0;
      for (double a : row.final_aucs) ss += (a - row.mean) * (a - row.mean);
      row.stddev = std::sqrt(ss / static_cast<double>(row.final_aucs.size() - 1));
    }
    report.rows.push_back(std::move(row));
  }

  std::ofstream csv = open_out(report.dir / "sweep.csv");
  csv << sweep_axis_name(axis) << ",seeds,mean_final_auc,std_final_auc\n";
  Json rows = Json::array();
  for (const SweepRow& r : report.rows) {
    csv << format_double(r.value) << ',' << r.final_aucs.size() << ',' << format_double(r.mean) << ','
        << format_double(r.stddev) << '\n';
    Json j;
    j["value"] = r.value;
    j["final_test_aucs"] = r.final_aucs;
    j["mean_final_auc"] = r.mean;
    j["std_final_auc"] = r.stddev;
    rows.push_back(j);
  }
  Json summary;
  summary["command"] = "sweep";
  summary["axis"] = std::string(sweep_axis_name(axis));
  summary["seeds"] = seeds;
  summary["rows"] = rows;
  write_json(report.dir / "summary.json", summary);
  return report;
}

}  // namespace tact
