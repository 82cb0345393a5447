#include "tact/harness/run_config.hpp"

#include <algorithm>

#include "tact/data/jsonl.hpp"
#include "tact/error.hpp"

namespace tact {

namespace {

constexpr std::string_view kSyntheticPrefix = "synthetic.";

const std::vector<std::string>& model_keys() {
  static const std::vector<std::string> k = {"onehot_dim",    "ff_width", "item_dim", "hidden_dim",
                                             "gru_layers",    "attention_dim", "aux_dim", "time_aware"};
  return k;
}

const std::vector<std::string>& own_keys() {
  static const std::vector<std::string> k = {"train_data",          "test_data",          "history_length",
                                             "category_vocab",      "calibration_buckets", "calibration_epsilon",
                                             "calibration_fit",     "baseline_run"};
  return k;
}

KeyValueConfig select(const KeyValueConfig& kv, const std::vector<std::string>& keys) {
  KeyValueConfig out;
  for (const auto& key : keys) {
    if (auto v = kv.raw(key)) out.set(key, *v);
  }
  return out;
}

}  // namespace

std::string_view calibration_fit_name(CalibrationFit fit) { return fit == CalibrationFit::Train ? "train" : "test"; }

CalibrationFit parse_calibration_fit(std::string_view name) {
  if (name == "train") return CalibrationFit::Train;
  if (name == "test") return CalibrationFit::Test;
  throw ConfigError("calibration_fit must be 'train' or 'test', got '" + std::string(name) + "'");
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> all = own_keys();
    all.insert(all.end(), model_keys().begin(), model_keys().end());
    all.insert(all.end(), TrainConfig::keys().begin(), TrainConfig::keys().end());
    for (const auto& s : SyntheticConfig::keys()) {
      if (s != "L") all.push_back(std::string(kSyntheticPrefix) + s);
    }
    return all;
  }();
  return k;
}

void RunConfig::validate() const {
  if (history_length == 0) throw ConfigError("history_length must be at least 1");
  if (calibration_buckets == 0) throw ConfigError("calibration_buckets must be at least 1");
  if (!(calibration_epsilon > 0.0)) throw ConfigError("calibration_epsilon must be positive");
  if (train_data.empty() && !test_data.empty()) throw ConfigError("test_data given without train_data");
  model.validate();
  train.validate();
}

KeyValueConfig RunConfig::to_key_values() const {
  KeyValueConfig kv;
  kv.set("train_data", train_data);
  kv.set("test_data", test_data);
  kv.set("history_length", static_cast<std::uint64_t>(history_length));
  kv.set("category_vocab", static_cast<std::uint64_t>(category_vocab));
  kv.set("calibration_buckets", static_cast<std::uint64_t>(calibration_buckets));
  kv.set("calibration_epsilon", calibration_epsilon);
  kv.set("calibration_fit", std::string(calibration_fit_name(calibration_fit)));
  kv.set("baseline_run", baseline_run);
  const KeyValueConfig m = model.to_key_values();
  for (const auto& key : model_keys()) kv.set(key, *m.raw(key));
  const KeyValueConfig t = train.to_key_values();
  for (const auto& [key, value] : t.entries()) kv.set(key, value);
  const KeyValueConfig s = synthetic.to_key_values();
  for (const auto& [key, value] : s.entries()) {
    if (key != "L") kv.set(std::string(kSyntheticPrefix) + key, value);
  }
  return kv;
}

RunConfig RunConfig::from_key_values(const KeyValueConfig& kv) { return from_key_values(kv, RunConfig{}); }

RunConfig RunConfig::from_key_values(const KeyValueConfig& kv, RunConfig c) {
  if (kv.contains("synthetic.L")) {
    throw ConfigError("synthetic.L is not a run key; the history length is set by history_length");
  }
  const auto unknown = kv.unknown_keys(keys());
  if (!unknown.empty()) throw ConfigError("unknown config key '" + unknown.front() + "'");

  c.train_data = kv.get_string("train_data", c.train_data);
  c.test_data = kv.get_string("test_data", c.test_data);
  c.history_length = kv.get_uint("history_length", c.history_length);
  c.category_vocab = kv.get_uint("category_vocab", c.category_vocab);
  c.calibration_buckets = kv.get_uint("calibration_buckets", c.calibration_buckets);
  c.calibration_epsilon = kv.get_double("calibration_epsilon", c.calibration_epsilon);
  if (kv.contains("calibration_fit")) c.calibration_fit = parse_calibration_fit(kv.get_string("calibration_fit", ""));
  c.baseline_run = kv.get_string("baseline_run", c.baseline_run);
  c.model = ModelConfig::from_key_values(select(kv, model_keys()), c.model);
  c.train = TrainConfig::from_key_values(kv, c.train);

  KeyValueConfig syn;
  for (const auto& [key, value] : kv.entries()) {
    if (key.starts_with(kSyntheticPrefix)) syn.set(key.substr(kSyntheticPrefix.size()), value);
  }
  c.synthetic = SyntheticConfig::from_key_values(syn, c.synthetic);
  c.synthetic.history_length = c.history_length;
  c.model.history_length = c.history_length;
  return c;
}

namespace {

SplitTruth truth_of(SyntheticDataset& d) {
  return SplitTruth{std::move(d.positive_truth), std::move(d.negative_truth)};
}

void apply_vocab(RunData& data, std::size_t configured) {
  std::size_t vocab = data.train.info().category_vocab;
  if (data.test) vocab = std::max(vocab, data.test->info().category_vocab);
  if (configured > 0) {
    if (configured < vocab) {
      throw ValidationError("category_vocab " + std::to_string(configured) + " is smaller than the data need (" +
                            std::to_string(vocab) + ")");
    }
    vocab = configured;
  }
  data.train.info().category_vocab = vocab;
  if (data.test) data.test->info().category_vocab = vocab;
}

}  // namespace

RunData load_run_data(const RunConfig& config) {
  RunData out;
  if (config.synthetic_data()) {
    SyntheticConfig sc = config.synthetic;
    sc.history_length = config.history_length;
    SyntheticSplit split = split_by_day(generate_synthetic(sc), sc);
    out.train = std::move(split.train.data);
    out.test = std::move(split.test.data);
    out.train_truth = truth_of(split.train);
    out.test_truth = truth_of(split.test);
  } else {
    SchemaConfig schema;
    schema.history_length = config.history_length;
    if (config.category_vocab > 0) schema.category_vocab = config.category_vocab;
    out.train = load_jsonl(config.train_data, schema);
    if (!config.test_data.empty()) {
      schema.aux_dim = out.train.info().aux_dim;
      out.test = load_jsonl(config.test_data, schema);
    }
  }
  apply_vocab(out, config.category_vocab);
  return out;
}

ModelConfig model_config_for(const RunConfig& config, const DatasetInfo& info) {
  ModelConfig m = ModelConfig::for_dataset(info, config.model);
  m.validate();
  return m;
}

}  // namespace tact
