#include "tact/sampler/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "tact/data/minibatch.hpp"
#include "tact/error.hpp"
#include "tact/eval/metrics.hpp"
#include "tact/eval/scoring.hpp"
#include "tact/sampler/adversarial.hpp"
#include "tact/sampler/negative_sampling.hpp"

namespace tact {

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid training config: ") + what);
  };
  require(steps_per_epoch >= 1, "steps_per_epoch must be at least 1");
  require(lr_d > 0.0 && lr_g > 0.0, "learning rates must be positive");
  require(lr_halving_epochs >= 1, "lr_halving_epochs must be at least 1");
  require(gamma > 0.0, "gamma must be positive");
  require(lambda_item >= 0.0 && lambda_history >= 0.0, "penalty coefficients must be non-negative");
  require(candidates >= 1, "candidates (C) must be at least 1");
  require(samples_per_positive >= 1, "samples_per_positive (K) must be at least 1");
  require(temperature > 0.0, "temperature must be positive");
  require(temperature_decay > 0.0 && temperature_decay <= 1.0, "temperature_decay must lie in (0, 1]");
  require(under_sample_ratio >= 1, "under_sample_ratio must be at least 1");
}

KeyValueConfig TrainConfig::to_key_values() const {
  KeyValueConfig kv;
  kv.set("sampler", std::string(sampler_name(sampler)));
  kv.set("epochs", static_cast<std::uint64_t>(epochs));
  kv.set("steps_per_epoch", static_cast<std::uint64_t>(steps_per_epoch));
  kv.set("pretrain_epochs", static_cast<std::uint64_t>(pretrain_epochs));
  kv.set("lr_d", lr_d);
  kv.set("lr_g", lr_g);
  kv.set("lr_halving_epochs", static_cast<std::uint64_t>(lr_halving_epochs));
  kv.set("gamma", gamma);
  kv.set("lambda_item", lambda_item);
  kv.set("lambda_history", lambda_history);
  kv.set("candidates", static_cast<std::uint64_t>(candidates));
  kv.set("samples_per_positive", static_cast<std::uint64_t>(samples_per_positive));
  kv.set("temperature", temperature);
  kv.set("temperature_decay", temperature_decay);
  kv.set("under_sample_ratio", static_cast<std::uint64_t>(under_sample_ratio));
  kv.set("eval_every", static_cast<std::uint64_t>(eval_every));
  kv.set("snapshot_negatives", static_cast<std::uint64_t>(snapshot_negatives));
  kv.set("tau_positives", static_cast<std::uint64_t>(tau_positives));
  kv.set("seed", seed);
  return kv;
}

TrainConfig TrainConfig::from_key_values(const KeyValueConfig& kv, TrainConfig c) {
  if (kv.contains("sampler")) c.sampler = parse_sampler_kind(kv.get_string("sampler", ""));
  c.epochs = kv.get_uint("epochs", c.epochs);
  c.steps_per_epoch = kv.get_uint("steps_per_epoch", c.steps_per_epoch);
  c.pretrain_epochs = kv.get_uint("pretrain_epochs", c.pretrain_epochs);
  c.lr_d = kv.get_double("lr_d", c.lr_d);
  c.lr_g = kv.get_double("lr_g", c.lr_g);
  c.lr_halving_epochs = kv.get_uint("lr_halving_epochs", c.lr_halving_epochs);
  c.gamma = kv.get_double("gamma", c.gamma);
  c.lambda_item = kv.get_double("lambda_item", c.lambda_item);
  c.lambda_history = kv.get_double("lambda_history", c.lambda_history);
  c.candidates = kv.get_uint("candidates", c.candidates);
  c.samples_per_positive = kv.get_uint("samples_per_positive", c.samples_per_positive);
  c.temperature = kv.get_double("temperature", c.temperature);
  c.temperature_decay = kv.get_double("temperature_decay", c.temperature_decay);
  c.under_sample_ratio = kv.get_uint("under_sample_ratio", c.under_sample_ratio);
  c.eval_every = kv.get_uint("eval_every", c.eval_every);
  c.snapshot_negatives = kv.get_uint("snapshot_negatives", c.snapshot_negatives);
  c.tau_positives = kv.get_uint("tau_positives", c.tau_positives);
  c.seed = kv.get_uint("seed", c.seed);
  return c;
}

const std::vector<std::string>& TrainConfig::keys() {
  static const std::vector<std::string> k = {
      "sampler",          "epochs",          "steps_per_epoch",    "pretrain_epochs", "lr_d",
      "lr_g",             "lr_halving_epochs", "gamma",            "lambda_item",     "lambda_history",
      "candidates",       "samples_per_positive", "temperature",   "temperature_decay", "under_sample_ratio",
      "eval_every",       "snapshot_negatives", "tau_positives",   "seed"};
  return k;
}

namespace {

constexpr std::uint64_t kStreamSampling = 0;
constexpr std::uint64_t kStreamDiscriminator = 1;
constexpr std::uint64_t kStreamGenerator = 2;
constexpr std::uint64_t kStreamMinibatch = 3;
constexpr std::uint64_t kStreamDiagnostics = 4;

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// A fixed training subset for the per-epoch AUC snapshot: every positive and
// a seeded subset of negatives.
Dataset snapshot_subset(const Dataset& train, std::size_t negatives, Rng& rng) {
  Dataset out(train.info());
  for (const Sample& s : train.positives()) out.add(s);
  const auto& neg = train.negatives();
  std::vector<std::size_t> picks = sample_without_replacement(rng, neg.size(), std::min(negatives, neg.size()));
  std::sort(picks.begin(), picks.end());
  for (std::size_t i : picks) out.add(neg[i]);
  return out;
}

class Loop {
 public:
  Loop(const Dataset& train, const Dataset* test, const ModelConfig& model, const TrainConfig& config)
      : train_(train),
        test_(test),
        cfg_(config),
        rng_(stream_seed(config.seed, kStreamSampling)),
        diag_rng_(stream_seed(config.seed, kStreamDiagnostics)),
        d_(model, stream_seed(config.seed, kStreamDiscriminator)),
        d_opt_(AdamConfig{config.lr_d}),
        reward_(reward_config_for(config.sampler, config.lambda_item, config.lambda_history)),
        users_(train.negatives()),
        catalog_(config.sampler == SamplerKind::IrganStyle ? ItemCatalog(train) : ItemCatalog(Dataset{})) {
    if (train.positives().empty()) throw ValidationError("training data has no positives");
    const bool needs_negatives = cfg_.sampler != SamplerKind::IrganStyle;
    if (needs_negatives && train.negatives().empty()) throw ValidationError("training data has no negatives");

    if (uses_pointwise_loss(cfg_.sampler)) {
      if (cfg_.sampler == SamplerKind::UnderSample) {
        UnderSampleResult reduced = under_sample_build(train, cfg_.under_sample_ratio, rng_);
        insufficient_ = reduced.insufficient;
        pool_ = std::move(reduced.data);
      } else {
        pool_ = train;
      }
      pool_ptrs_.reserve(pool_.size());
      pool_.for_each([&](const Sample& s) { pool_ptrs_.push_back(&s); });
    }
    const std::size_t count = uses_pointwise_loss(cfg_.sampler) ? pool_ptrs_.size() : train.positives().size();
    batch_size_ = ceil_div(count, cfg_.steps_per_epoch);
    batches_.emplace(count, batch_size_, stream_seed(cfg_.seed, kStreamMinibatch));
    snapshot_ = snapshot_subset(train, cfg_.snapshot_negatives, diag_rng_);

    if (uses_generator(cfg_.sampler)) {
      generator_.emplace(Network(model, stream_seed(cfg_.seed, kStreamGenerator)), cfg_.temperature,
                         cfg_.temperature_decay, AdamConfig{cfg_.lr_g});
    }
  }

  TrainResult run(const EpochCallback& on_epoch) {
    if (!uses_pointwise_loss(cfg_.sampler)) {
      for (std::size_t s = 0; s < cfg_.pretrain_epochs * cfg_.steps_per_epoch; ++s) uniform_step(false);
    }
    TrainResult result;
    result.batch_size = batch_size_;
    result.insufficient_negatives = insufficient_;
    result.best = d_;
    for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
      const double factor = std::pow(0.5, static_cast<double>(epoch / cfg_.lr_halving_epochs));
      d_opt_.set_learning_rate(cfg_.lr_d * factor);
      if (generator_) generator_->optimizer.set_learning_rate(cfg_.lr_g * factor);

      std::vector<StepMetrics> rows;
      EpochMetrics em;
      em.epoch = epoch + 1;
      double reward_sum = 0.0;
      for (std::size_t step = 0; step < cfg_.steps_per_epoch; ++step) {
        const bool last = step + 1 == cfg_.steps_per_epoch;
        StepMetrics row = one_step(last, em);
        row.epoch = epoch + 1;
        row.step = step + 1;
        em.d_loss += row.d_loss / static_cast<double>(cfg_.steps_per_epoch);
        if (row.mean_reward) reward_sum += *row.mean_reward;
        rows.push_back(row);
      }
      if (generator_) {
        em.mean_reward = reward_sum / static_cast<double>(cfg_.steps_per_epoch);
        generator_->anneal();
      }
      em.train_auc_snapshot = dataset_auc(d_, snapshot_);
      for (StepMetrics& r : rows) r.train_auc_snapshot = em.train_auc_snapshot;

      const bool evaluate = test_ != nullptr && ((cfg_.eval_every > 0 && (epoch + 1) % cfg_.eval_every == 0) ||
                                                 epoch + 1 == cfg_.epochs);
      if (evaluate) {
        em.test_auc = dataset_auc(d_, *test_);
        result.final_test_auc = em.test_auc;
        if (!result.best_test_auc || *em.test_auc > *result.best_test_auc) {
          result.best_test_auc = em.test_auc;
          result.best_epoch = epoch + 1;
          result.best = d_;
        }
      }
      if (on_epoch) on_epoch(em, rows);
      result.steps.insert(result.steps.end(), rows.begin(), rows.end());
      result.epochs.push_back(em);
    }
    if (cfg_.epochs == 0 && test_ != nullptr) result.final_test_auc = dataset_auc(d_, *test_);
    if (!result.best_test_auc) result.best = d_;
    result.discriminator = std::move(d_);
    if (generator_) result.generator = std::move(generator_->net);
    return result;
  }

 private:
  std::vector<const Sample*> positive_batch() {
    const auto& idx = batches_->next();
    std::vector<const Sample*> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(&train_.positives()[i]);
    return out;
  }

  StepMetrics one_step(bool last_of_epoch, EpochMetrics& em) {
    switch (cfg_.sampler) {
      case SamplerKind::Pointwise:
      case SamplerKind::UnderSample:
        return pointwise();
      case SamplerKind::Uniform:
        return uniform_step(false);
      case SamplerKind::UserFixed:
        return uniform_step(true);
      default:
        return adversarial_step(last_of_epoch, em);
    }
  }

  StepMetrics pointwise() {
    const auto& idx = batches_->next();
    std::vector<const Sample*> batch;
    batch.reserve(idx.size());
    for (std::size_t i : idx) batch.push_back(pool_ptrs_[i]);
    StepMetrics row;
    row.d_loss = pointwise_step(d_, d_opt_, batch);
    return row;
  }

  StepMetrics uniform_step(bool user_fixed) {
    const auto pos = positive_batch();
    const auto& negatives = train_.negatives();
    std::vector<const Sample*> neg;
    neg.reserve(pos.size());
    for (const Sample* p : pos) {
      const std::size_t i = user_fixed ? user_fixed_sample(*p, users_, rng_)
                                       : uniform_sample_index(negatives.size(), rng_);
      neg.push_back(&negatives[i]);
    }
    StepMetrics row;
    row.d_loss = discriminator_step(d_, d_opt_, pos, neg, cfg_.gamma);
    return row;
  }

  StepMetrics adversarial_step(bool last_of_epoch, EpochMetrics& em) {
    GeneratorState& g = *generator_;
    const auto pos = positive_batch();
    const auto& negatives = train_.negatives();
    const bool constructed = cfg_.sampler == SamplerKind::IrganStyle;

    std::vector<std::vector<Sample>> made(constructed ? pos.size() : 0);
    std::vector<std::vector<const Sample*>> cands(pos.size());
    std::vector<PolicyEpisode> episodes(pos.size());
    std::vector<const Sample*> pair_pos, pair_neg;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (constructed) {
        for (std::size_t k = 0; k < cfg_.candidates; ++k) made[i].push_back(make_nonpositive(*pos[i], catalog_, rng_));
        for (const Sample& s : made[i]) cands[i].push_back(&s);
      } else {
        const std::size_t c = std::min(cfg_.candidates, negatives.size());
        for (std::size_t j : sample_without_replacement(rng_, negatives.size(), c)) cands[i].push_back(&negatives[j]);
      }
      episodes[i] = open_episode(g.net, *pos[i], cands[i], g.temperature);
      for (std::size_t k = 0; k < cfg_.samples_per_positive; ++k) {
        const std::size_t a = sample_action(episodes[i].probabilities, rng_);
        episodes[i].actions.push_back(a);
        pair_pos.push_back(pos[i]);
        pair_neg.push_back(cands[i][a]);
      }
    }

    StepMetrics row;
    row.temperature = g.temperature;
    row.d_loss = discriminator_step(d_, d_opt_, pair_pos, pair_neg, cfg_.gamma);

    std::vector<double> rewards;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const SampleEmbedding e = d_.embed(*pos[i]);
      for (std::size_t a : episodes[i].actions) {
        const SampleEmbedding e_neg = d_.embed(*cands[i][a]);
        const double r = compute_reward(*pos[i], e, *cands[i][a], e_neg, d_.score(e_neg), reward_);
        episodes[i].rewards.push_back(r);
        rewards.push_back(r);
      }
    }
    row.baseline = g.baseline;
    row.g_surrogate = generator_step(g, episodes);
    g.baseline = update_baseline(rewards);
    row.mean_reward = g.baseline;

    if (last_of_epoch && cfg_.tau_positives > 0) {
      std::vector<std::vector<double>> scores, penalties;
      for (std::size_t i = 0; i < std::min(cfg_.tau_positives, pos.size()); ++i) {
        const SampleEmbedding e = d_.embed(*pos[i]);
        scores.emplace_back();
        penalties.emplace_back();
        for (const Sample* c : cands[i]) {
          const SampleEmbedding ec = d_.embed(*c);
          scores.back().push_back(d_.score(ec));
          penalties.back().push_back(compute_penalty(e, ec, reward_.lambda_item, reward_.lambda_history));
        }
      }
      const TauSample tau = tau_diagnostic(scores, penalties, diag_rng_);
      em.tau = tau.tau;
      em.tau_random = tau.tau_random;
    }
    return row;
  }

  const Dataset& train_;
  const Dataset* test_;
  TrainConfig cfg_;
  Rng rng_;
  Rng diag_rng_;
  Network d_;
  AdamState d_opt_;
  RewardConfig reward_;
  UserIndex users_;
  ItemCatalog catalog_;
  std::optional<GeneratorState> generator_;
  Dataset pool_;
  std::vector<const Sample*> pool_ptrs_;
  bool insufficient_ = false;
  std::size_t batch_size_ = 0;
  std::optional<MinibatchIterator> batches_;
  Dataset snapshot_;
};

}  // namespace

TrainResult adversarial_train(const Dataset& train, const Dataset* test, const ModelConfig& model,
                              const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  Loop loop(train, test, model, config);
  return loop.run(on_epoch);
}

}  // namespace tact
