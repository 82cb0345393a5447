// Command-line front end: synthesize, train, eval, calibrate, sweep.
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tact/error.hpp"
#include "tact/harness/commands.hpp"

namespace {

std::string kebab(std::string key) {
  for (char& c : key) {
    if (c == '_' || c == '.') c = '-';
  }
  return key;
}

const std::map<std::string, std::string>& help_text() {
  static const std::map<std::string, std::string> h = {
      {"train_data", "training JSON-Lines file; synthetic data when empty"},
      {"test_data", "test JSON-Lines file"},
      {"history_length", "history length L"},
      {"category_vocab", "cid3 vocabulary size, 0 to infer"},
      {"item_dim", "item embedding width d"},
      {"hidden_dim", "GRU state width h"},
      {"attention_dim", "attention width v"},
      {"ff_width", "hidden width of the item network"},
      {"time_aware", "use temporal signals (false gives the GRU Attention ablation)"},
      {"sampler", "uniform, under_sample_1to5, user_fixed, pointwise, rgan, rgan_score_only, "
                  "rgan_penalty_only or irgan_style"},
      {"candidates", "candidate set size C"},
      {"temperature", "initial policy temperature T0"},
      {"temperature_decay", "temperature decay per epoch"},
      {"samples_per_positive", "negatives drawn per positive K"},
      {"lr_d", "discriminator learning rate"},
      {"lr_g", "generator learning rate"},
      {"gamma", "hinge margin"},
      {"lambda_item", "item-embedding penalty weight"},
      {"lambda_history", "history-embedding penalty weight"},
      {"calibration_buckets", "number of calibration buckets n"},
      {"calibration_epsilon", "slope added to the isotonic fit"},
      {"calibration_fit", "split the calibration is fitted on: train or test"},
      {"baseline_run", "run directory whose final test AUC is the RelaImpr base"},
  };
  return h;
}

struct Common {
  std::string config_file;
  std::string output_root;
  std::string run_name;
  bool force = false;
  bool quiet = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_file, "key = value file applied before the flags")->check(CLI::ExistingFile);
  cmd->add_option("--output-root", c.output_root, std::string("output root (default $") + tact::kOutputRootEnv +
                                                      " or ./runs)");
  cmd->add_option("--run-name", c.run_name, "run directory name under the output root");
  cmd->add_flag("--force", c.force, "write into a non-empty run directory");
  cmd->add_flag("--quiet", c.quiet, "no progress output");
  for (const std::string& key : tact::RunConfig::keys()) {
    const auto it = help_text().find(key);
    const std::string help = it != help_text().end() ? it->second : "sets " + key;
    c.options[key] = cmd->add_option("--" + kebab(key), c.values[key], help)->group("Config");
  }
}

tact::RunConfig resolve(const Common& c) {
  tact::KeyValueConfig kv;
  if (!c.config_file.empty()) kv = tact::KeyValueConfig::load(c.config_file);
  for (const auto& [key, opt] : c.options) {
    if (opt->count() > 0) kv.set(key, c.values.at(key));
  }
  return tact::RunConfig::from_key_values(kv);
}

tact::RunOptions run_options(const Common& c) {
  tact::RunOptions o;
  o.output_root = c.output_root.empty() ? tact::output_root_from_env() : std::filesystem::path(c.output_root);
  o.run_name = c.run_name;
  o.force = c.force;
  o.log = c.quiet ? nullptr : &std::cerr;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-aware attention CTR model with adversarial negative sampling"};
  app.require_subcommand(1);

  Common synth_c, train_c, eval_c, cal_c, sweep_c;
  CLI::App* synth = app.add_subcommand("synthesize", "generate a synthetic dataset with a day-based train/test split");
  add_common(synth, synth_c);
  CLI::App* train = app.add_subcommand("train", "train a model and write metrics, checkpoints and calibration");
  add_common(train, train_c);
  CLI::App* eval = app.add_subcommand("eval", "test AUC of a checkpoint");
  add_common(eval, eval_c);
  std::string eval_ckpt;
  eval->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required()->check(CLI::ExistingFile);
  CLI::App* cal = app.add_subcommand("calibrate", "fit absolute-CTR calibration for a checkpoint");
  add_common(cal, cal_c);
  std::string cal_ckpt;
  std::vector<std::size_t> bucket_sweep;
  cal->add_option("--checkpoint", cal_ckpt, "checkpoint file")->required()->check(CLI::ExistingFile);
  cal->add_option("--bucket-sweep", bucket_sweep, "comma-separated bucket counts")->delimiter(',');
  CLI::App* sweep = app.add_subcommand("sweep", "repeat training over values of C or T0 and several seeds");
  add_common(sweep, sweep_c);
  std::string axis;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  sweep->add_option("--axis", axis, "candidates (C) or temperature (T0)")->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required()->delimiter(',');
  sweep->add_option("--seeds", seeds, "comma-separated training seeds")->delimiter(',')->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const tact::SynthesizeReport r = tact::cmd_synthesize(resolve(synth_c), run_options(synth_c));
      std::cout << r.dir.string() << '\n';
    } else if (train->parsed()) {
      const tact::TrainReport r = tact::cmd_train(resolve(train_c), run_options(train_c));
      std::cout << r.dir.string() << '\n';
    } else if (eval->parsed()) {
      const tact::EvalReport r = tact::cmd_eval(resolve(eval_c), run_options(eval_c), eval_ckpt);
      std::cout << r.dir.string() << '\n';
    } else if (cal->parsed()) {
      const tact::CalibrateReport r = tact::cmd_calibrate(resolve(cal_c), run_options(cal_c), cal_ckpt, bucket_sweep);
      std::cout << r.dir.string() << '\n';
    } else if (sweep->parsed()) {
      const tact::SweepReport r =
          tact::cmd_sweep(resolve(sweep_c), run_options(sweep_c), tact::parse_sweep_axis(axis), values, seeds);
      std::cout << r.dir.string() << '\n';
    }
  } catch (const tact::Error& e) {
    std::cerr << "tact: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tact: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
