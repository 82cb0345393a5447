#include "tact/data/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tact/error.hpp"
#include "tact/numeric/ops.hpp"
#include "tact/numeric/random.hpp"

namespace tact {

namespace {

constexpr double kQualityWeight = 1.0;
constexpr double kAffinityWeight = 1.5;
constexpr double kHistoryWeight = 1.0;
constexpr double kWeeklyShare = 0.4;
constexpr double kRecencyScale = 2.0;
constexpr double kHistoryChoiceSharpness = 4.0;
constexpr int kHistoryCandidates = 8;
constexpr double kFavouriteShare = 0.5;
constexpr double kDriftRadius = 0.6;
constexpr double kQuantaPerUnit = 1000.0;
constexpr std::int64_t kDay = 86400;

struct Item {
  std::shared_ptr<const RawFeatures> raw;
  std::vector<double> unit;
  std::uint32_t cid3 = 0;
  double quality = 0.0;
};

struct User {
  std::vector<double> interest;
  std::vector<double> drift_a;  // orthonormal plane the interest circles in
  std::vector<double> drift_b;
  double drift_phase = 0.0;
  std::array<std::uint32_t, 2> favourites{};
  double peak_hour = 20.0;
  double peak_day = 0.0;
  double bias = 0.0;
  std::vector<double> aux;
};

std::vector<double> normalized(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return v;
}

std::vector<double> gaussian_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = standard_normal(rng);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return ops::kernel::dot(a.data(), b.data(), a.size());
}

double quantize(double v) { return std::round(v * kQuantaPerUnit) / kQuantaPerUnit; }

double exponential(Rng& rng, double mean) { return -mean * std::log(1.0 - uniform01(rng)); }

class World {
 public:
  World(const SyntheticConfig& cfg, Rng& rng) : cfg_(cfg) {
    const std::size_t dim = kRawFeatureDim;
    std::vector<std::vector<double>> centroids(cfg.n_categories + 1);
    for (std::size_t c = 1; c <= cfg.n_categories; ++c) centroids[c] = gaussian_vector(rng, dim);

    const std::vector<double> quality_direction = normalized(gaussian_vector(rng, dim));
    by_category_.resize(cfg.n_categories + 1);
    items_.reserve(cfg.n_items);
    for (std::size_t i = 0; i < cfg.n_items; ++i) {
      const auto c = static_cast<std::uint32_t>(1 + uniform_index(rng, cfg.n_categories));
      RawFeatures raw(dim);
      for (std::size_t k = 0; k < dim; ++k) raw[k] = quantize(centroids[c][k] + 0.5 * standard_normal(rng));
      Item item;
      item.unit = normalized(raw);
      item.quality = dot(quality_direction, raw);
      item.raw = std::make_shared<const RawFeatures>(std::move(raw));
      item.cid3 = c;
      by_category_[c].push_back(i);
      items_.push_back(std::move(item));
    }
    // Standardise quality across the catalog.
    double mean = 0.0, sq = 0.0;
    for (const Item& it : items_) mean += it.quality;
    mean /= static_cast<double>(items_.size());
    for (const Item& it : items_) sq += (it.quality - mean) * (it.quality - mean);
    const double sd = std::sqrt(sq / static_cast<double>(items_.size()));
    for (Item& it : items_) it.quality = sd > 0.0 ? (it.quality - mean) / sd : 0.0;

    users_.reserve(cfg.n_users);
    for (std::size_t u = 0; u < cfg.n_users; ++u) {
      User user;
      user.favourites[0] = static_cast<std::uint32_t>(1 + uniform_index(rng, cfg.n_categories));
      user.favourites[1] = static_cast<std::uint32_t>(1 + uniform_index(rng, cfg.n_categories));
      std::vector<double> interest(dim);
      const auto a = normalized(centroids[user.favourites[0]]);
      const auto b = normalized(centroids[user.favourites[1]]);
      const auto noise = normalized(gaussian_vector(rng, dim));
      for (std::size_t k = 0; k < dim; ++k) interest[k] = a[k] + b[k] + 0.3 * noise[k];
      user.interest = normalized(std::move(interest));
      user.drift_a = normalized(gaussian_vector(rng, dim));
      std::vector<double> b_dir = gaussian_vector(rng, dim);
      const double along = dot(b_dir, user.drift_a);
      for (std::size_t k = 0; k < dim; ++k) b_dir[k] -= along * user.drift_a[k];
      user.drift_b = normalized(std::move(b_dir));
      user.drift_phase = 2.0 * std::numbers::pi * uniform01(rng);
      user.peak_hour = std::fmod(20.0 + 2.0 * standard_normal(rng) + 24.0, 24.0);
      user.peak_day = 7.0 * uniform01(rng);
      user.bias = 0.5 * standard_normal(rng);
      user.aux.resize(cfg.aux_dim);
      for (std::size_t k = 0; k < cfg.aux_dim; ++k) {
        user.aux[k] = k == 0 ? quantize(user.bias / 0.5 + 0.3 * standard_normal(rng))
                             : quantize(standard_normal(rng));
      }
      users_.push_back(std::move(user));
    }
  }

  const Item& item(std::size_t i) const { return items_[i]; }
  const User& user(std::size_t u) const { return users_[u]; }

  std::size_t draw_item(Rng& rng, const User& user, double favourite_share) const {
    if (uniform01(rng) < favourite_share) {
      const auto& pool = by_category_[user.favourites[uniform_index(rng, 2)]];
      if (!pool.empty()) return pool[uniform_index(rng, pool.size())];
    }
    return uniform_index(rng, items_.size());
  }

  // Each user's interest circles around its base with a random phase, so the
  // population as a whole is stationary while every single user drifts.
  std::vector<double> interest_at(const User& user, std::int64_t t) const {
    const double horizon = static_cast<double>(cfg_.horizon_days) * kDay;
    const double progress = static_cast<double>(t - cfg_.start_time) / horizon;
    const double theta = user.drift_phase + 2.0 * std::numbers::pi * cfg_.drift_rate * progress;
    const double ca = kDriftRadius * std::cos(theta);
    const double cb = kDriftRadius * std::sin(theta);
    std::vector<double> v(user.interest.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = user.interest[k] + ca * user.drift_a[k] + cb * user.drift_b[k];
    return normalized(std::move(v));
  }

  double periodic(const User& user, const TimeSignals& t) const {
    if (cfg_.periodic_amplitude == 0.0) return 0.0;
    const double hour = static_cast<double>(t.absolute % kDay) / 3600.0;
    const double daily = std::cos(2.0 * std::numbers::pi * (hour - user.peak_hour) / 24.0);
    const double weekly = std::cos(2.0 * std::numbers::pi * (t.day - user.peak_day) / 7.0);
    return cfg_.periodic_amplitude * (daily + kWeeklyShare * weekly);
  }

 private:
  const SyntheticConfig& cfg_;
  std::vector<Item> items_;
  std::vector<User> users_;
  std::vector<std::vector<std::size_t>> by_category_;
};

ItemRecord make_record(const World& world, std::size_t index, std::int64_t t) {
  const Item& it = world.item(index);
  ItemRecord rec;
  rec.raw = it.raw;
  rec.time = decompose_timestamp(t);
  rec.cid3 = it.cid3;
  rec.item_id = static_cast<std::int64_t>(index);
  return rec;
}

void validate_config(const SyntheticConfig& c) {
  if (c.n_users == 0 || c.n_items == 0 || c.n_categories == 0 || c.n_samples == 0) {
    throw ValidationError("synthetic config needs positive n_users, n_items, n_categories and n_samples");
  }
  if (!(c.ctr > 0.0 && c.ctr < 1.0)) throw ValidationError("synthetic ctr must lie in (0, 1)");
  if (c.ctr * static_cast<double>(c.n_samples) < 1.0) {
    throw ValidationError("infeasible synthetic config: ctr * n_samples < 1");
  }
  if (c.horizon_days < 1 || c.test_days < 0 || c.test_days >= c.horizon_days) {
    throw ValidationError("synthetic config needs horizon_days >= 1 and 0 <= test_days < horizon_days");
  }
  if (c.history_length == 0) throw ValidationError("history length L must be positive");
  if (c.periodic_amplitude < 0.0 || c.drift_rate < 0.0) {
    throw ValidationError("periodic_amplitude and drift_rate must be non-negative");
  }
  if (c.start_time < 30 * kDay) throw ValidationError("start_time must leave room for click histories");
}

double solve_intercept(const std::vector<double>& partial, double ctr) {
  double lo = -30.0, hi = 30.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double mean = 0.0;
    for (double s : partial) mean += ops::sigmoid(mid + s);
    mean /= static_cast<double>(partial.size());
    (mean < ctr ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticConfig& config) {
  validate_config(config);
  Rng world_rng(stream_seed(config.seed, 1));
  const World world(config, world_rng);

  Rng rng(stream_seed(config.seed, 2));
  const std::int64_t horizon = static_cast<std::int64_t>(config.horizon_days) * kDay;
  std::vector<std::int64_t> times(config.n_samples);
  for (auto& t : times) t = config.start_time + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(horizon)));
  std::sort(times.begin(), times.end());

  const std::size_t L = config.history_length;
  std::vector<double> recency(L);
  for (std::size_t l = 0; l < L; ++l) recency[l] = std::exp(-static_cast<double>(L - 1 - l) / kRecencyScale);
  const double recency_total = std::accumulate(recency.begin(), recency.end(), 0.0);
  for (double& w : recency) w /= recency_total;

  std::vector<Sample> samples(config.n_samples);
  std::vector<GroundTruth> truth(config.n_samples);
  std::vector<double> partial(config.n_samples);
  for (std::size_t n = 0; n < config.n_samples; ++n) {
    const std::size_t u = uniform_index(rng, config.n_users);
    const User& user = world.user(u);
    const std::int64_t t0 = times[n];

    Sample& s = samples[n];
    s.user = u;
    s.aux = user.aux;
    const std::size_t target = world.draw_item(rng, user, kFavouriteShare);
    s.target = make_record(world, target, t0);

    std::vector<std::int64_t> click_times(L);
    std::int64_t t = t0;
    for (std::size_t k = 0; k < L; ++k) {
      const double mean_gap = k == 0 ? 6.0 * 3600.0 : 12.0 * 3600.0;
      t -= std::max<std::int64_t>(60, static_cast<std::int64_t>(exponential(rng, mean_gap)));
      click_times[L - 1 - k] = t;
    }
    s.history.reserve(L);
    double history_match = 0.0;
    const Item& target_item = world.item(target);
    for (std::size_t l = 0; l < L; ++l) {
      const auto interest = world.interest_at(user, click_times[l]);
      std::size_t chosen = 0;
      double best = -1e300;
      for (int c = 0; c < kHistoryCandidates; ++c) {
        const std::size_t cand = world.draw_item(rng, user, 0.7);
        const double gumbel = -std::log(-std::log(std::max(uniform01(rng), 1e-300)));
        const double key = kHistoryChoiceSharpness * dot(interest, world.item(cand).unit) + gumbel;
        if (key > best) {
          best = key;
          chosen = cand;
        }
      }
      s.history.push_back(make_record(world, chosen, click_times[l]));
      history_match += recency[l] * dot(world.item(chosen).unit, target_item.unit);
    }

    const auto interest_now = world.interest_at(user, t0);
    const double periodic = world.periodic(user, s.target.time);
    partial[n] = kQualityWeight * target_item.quality + kAffinityWeight * dot(interest_now, target_item.unit) +
                 kHistoryWeight * history_match + user.bias + periodic;
    truth[n].periodic = periodic;
  }

  const double intercept = solve_intercept(partial, config.ctr);
  SyntheticDataset out;
  out.intercept = intercept;
  DatasetInfo info;
  info.category_vocab = config.n_categories + 1;
  info.history_length = L;
  info.aux_dim = config.aux_dim;
  out.data = Dataset(info);
  for (std::size_t n = 0; n < config.n_samples; ++n) {
    Sample& s = samples[n];
    truth[n].logit = intercept + partial[n];
    const double draw = synthetic_label_draw(config.seed, s.user, s.target.item_id, s.target.time.absolute);
    s.label = draw < ops::sigmoid(truth[n].logit) ? 1 : 0;
    (s.label == 1 ? out.positive_truth : out.negative_truth).push_back(truth[n]);
    out.data.add(std::move(s));
  }
  return out;
}

double synthetic_label_draw(std::uint64_t seed, std::uint64_t user, std::int64_t item_id, std::int64_t time) {
  const std::uint64_t key = mix64(seed ^ mix64(user * 0x9e3779b97f4a7c15ULL) ^
                                  mix64(static_cast<std::uint64_t>(item_id) + 0x632be59bd9b4e019ULL) ^
                                  mix64(static_cast<std::uint64_t>(time)));
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

SyntheticSplit split_by_day(const SyntheticDataset& all, const SyntheticConfig& config) {
  SyntheticSplit split;
  split.boundary = config.start_time + static_cast<std::int64_t>(config.horizon_days - config.test_days) * kDay;
  split.train.intercept = split.test.intercept = all.intercept;
  split.train.data = Dataset(all.data.info());
  split.test.data = Dataset(all.data.info());
  auto route = [&](const std::vector<Sample>& samples, const std::vector<GroundTruth>& truth, bool positive) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      SyntheticDataset& dst = samples[i].target.time.absolute < split.boundary ? split.train : split.test;
      dst.data.add(samples[i]);
      (positive ? dst.positive_truth : dst.negative_truth).push_back(truth[i]);
    }
  };
  route(all.data.positives(), all.positive_truth, true);
  route(all.data.negatives(), all.negative_truth, false);
  return split;
}

SyntheticConfig SyntheticConfig::from_key_values(const KeyValueConfig& kv) {
  return from_key_values(kv, SyntheticConfig{});
}

SyntheticConfig SyntheticConfig::from_key_values(const KeyValueConfig& kv, SyntheticConfig c) {
  const auto unknown = kv.unknown_keys(keys());
  if (!unknown.empty()) throw ConfigError("unknown synthetic config key '" + unknown.front() + "'");
  c.n_users = kv.get_uint("n_users", c.n_users);
  c.n_items = kv.get_uint("n_items", c.n_items);
  c.n_categories = kv.get_uint("n_categories", c.n_categories);
  c.n_samples = kv.get_uint("n_samples", c.n_samples);
  c.ctr = kv.get_double("ctr", c.ctr);
  c.horizon_days = static_cast<int>(kv.get_int("horizon_days", c.horizon_days));
  c.test_days = static_cast<int>(kv.get_int("test_days", c.test_days));
  c.history_length = kv.get_uint("L", c.history_length);
  c.aux_dim = kv.get_uint("aux_dim", c.aux_dim);
  c.periodic_amplitude = kv.get_double("periodic_amplitude", c.periodic_amplitude);
  c.drift_rate = kv.get_double("drift_rate", c.drift_rate);
  c.start_time = kv.get_int("start_time", c.start_time);
  c.seed = kv.get_uint("seed", c.seed);
  return c;
}

KeyValueConfig SyntheticConfig::to_key_values() const {
  KeyValueConfig kv;
  kv.set("n_users", static_cast<std::uint64_t>(n_users));
  kv.set("n_items", static_cast<std::uint64_t>(n_items));
  kv.set("n_categories", static_cast<std::uint64_t>(n_categories));
  kv.set("n_samples", static_cast<std::uint64_t>(n_samples));
  kv.set("ctr", ctr);
  kv.set("horizon_days", horizon_days);
  kv.set("test_days", test_days);
  kv.set("L", static_cast<std::uint64_t>(history_length));
  kv.set("aux_dim", static_cast<std::uint64_t>(aux_dim));
  kv.set("periodic_amplitude", periodic_amplitude);
  kv.set("drift_rate", drift_rate);
  kv.set("start_time", start_time);
  kv.set("seed", seed);
  return kv;
}

const std::vector<std::string>& SyntheticConfig::keys() {
  static const std::vector<std::string> k = {"n_users",      "n_items", "n_categories", "n_samples",
                                             "ctr",          "horizon_days", "test_days", "L",
                                             "aux_dim",      "periodic_amplitude", "drift_rate",
                                             "start_time",   "seed"};
  return k;
}

}  // namespace tact
