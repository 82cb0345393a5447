#include "tact/calibration/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "tact/error.hpp"
#include "tact/numeric/ops.hpp"

namespace tact {

std::vector<double> normalize_scores(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = ops::sigmoid(scores[i]);
  return out;
}

namespace {

double edge(std::size_t j, std::size_t n) { return static_cast<double>(j) / static_cast<double>(n); }

}  // namespace

std::size_t bucket_index(double sigma, std::size_t n) {
  if (n == 0) throw ContractError("bucket count must be positive");
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw ContractError("normalized score outside [0, 1]");
  auto j = static_cast<std::size_t>(sigma * static_cast<double>(n));
  j = std::min(j, n - 1);
  while (j > 0 && sigma < edge(j, n)) --j;
  while (j + 1 < n && sigma >= edge(j + 1, n)) ++j;
  return j;
}

BucketRates empirical_bucket_rates(std::span<const double> sigma, std::span<const int> labels, std::size_t n) {
  if (n == 0) throw ContractError("bucket count must be positive");
  if (sigma.size() != labels.size()) throw ContractError("scores and labels differ in length");
  BucketRates out;
  out.counts.assign(n, 0);
  out.positives.assign(n, 0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const std::size_t j = bucket_index(sigma[i], n);
    ++out.counts[j];
    if (labels[i] == 1) ++out.positives[j];
  }
  out.rates.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < n; ++j) {
    if (out.counts[j] > 0) out.rates[j] = static_cast<double>(out.positives[j]) / static_cast<double>(out.counts[j]);
  }
  return out;
}

std::vector<double> pava_fit(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw ContractError("PAVA: values and weights differ in length");
  struct Block {
    double mean;
    double weight;
    std::size_t end;  // one past the last member index
  };
  std::vector<Block> blocks;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] < 0.0) throw ContractError("PAVA: negative weight");
    if (weights[i] == 0.0) continue;
    members.push_back(i);
    blocks.push_back({values[i], weights[i], members.size()});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + top.weight;
      prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
      prev.weight = w;
      prev.end = top.end;
    }
  }
  if (members.empty()) throw ContractError("PAVA: every weight is zero");

  std::vector<double> out(values.size(), std::numeric_limits<double>::quiet_NaN());
  std::size_t begin = 0;
  for (const Block& b : blocks) {
    for (std::size_t m = begin; m < b.end; ++m) out[members[m]] = b.mean;
    begin = b.end;
  }
  const double first = out[members.front()];
  double carry = first;
  for (double& v : out) {
    if (std::isnan(v)) {
      v = carry;
    } else {
      carry = v;
    }
  }
  return out;
}

std::vector<double> strictify(std::span<const double> rates, double epsilon) {
  if (!(epsilon > 0.0)) throw ContractError("strictify needs a positive slope");
  for (std::size_t j = 1; j < rates.size(); ++j) {
    if (rates[j] < rates[j - 1]) throw ContractError("strictify needs nondecreasing rates");
  }
  std::vector<double> out(rates.begin(), rates.end());
  const std::size_t n = out.size();
  if (n < 2) return out;
  for (std::size_t j = 0; j < n; ++j) out[j] += epsilon * static_cast<double>(j) / static_cast<double>(n - 1);
  return out;
}

CalibrationModel fit_calibration(std::span<const double> sigma, std::span<const int> labels, std::size_t n,
                                 double epsilon) {
  const BucketRates raw = empirical_bucket_rates(sigma, labels, n);
  std::vector<double> values(n), weights(n);
  for (std::size_t j = 0; j < n; ++j) {
    weights[j] = static_cast<double>(raw.counts[j]);
    values[j] = raw.counts[j] > 0 ? raw.rates[j] : 0.0;
  }
  CalibrationModel model;
  model.n = n;
  model.epsilon = epsilon;
  model.fitted = pava_fit(values, weights);
  model.rates = strictify(model.fitted, epsilon);
  return model;
}

double calibrate_sample(double sigma, const CalibrationModel& model) {
  if (!model.fitted_model()) throw ContractError("calibration model is not fitted");
  const std::size_t n = model.n;
  const std::size_t j = bucket_index(sigma, n);
  double value;
  if (j + 1 == n) {
    value = model.rates[j];
  } else {
    const double alpha = (edge(j + 1, n) - sigma) / (edge(j + 1, n) - edge(j, n));
    value = alpha * model.rates[j] + (1.0 - alpha) * model.rates[j + 1];
  }
  return std::clamp(value, 0.0, 1.0);
}

double calibrate_dataset(std::span<const double> sigma, const CalibrationModel& model,
                         std::span<const std::uint32_t> categories, std::optional<std::uint32_t> only_category) {
  if (only_category && categories.size() != sigma.size()) {
    throw ContractError("category filter needs one category per sample");
  }
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (only_category && categories[i] != *only_category) continue;
    total += calibrate_sample(sigma[i], model);
    ++count;
  }
  if (count == 0) throw ValidationError("calibrate_dataset: no samples selected");
  return total / static_cast<double>(count);
}

void save_calibration(std::ostream& out, const CalibrationModel& model) {
  nlohmann::json doc;
  doc["n"] = model.n;
  doc["epsilon"] = model.epsilon;
  doc["rates"] = model.rates;
  doc["fitted"] = model.fitted;
  out << doc.dump(1) << '\n';
}

void save_calibration(const std::filesystem::path& path, const CalibrationModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write calibration model " + path.string());
  save_calibration(out, model);
}

CalibrationModel load_calibration(std::istream& in) {
  CalibrationModel model;
  try {
    const auto doc = nlohmann::json::parse(in);
    model.n = doc.at("n").get<std::size_t>();
    model.epsilon = doc.at("epsilon").get<double>();
    model.rates = doc.at("rates").get<std::vector<double>>();
    if (doc.contains("fitted")) model.fitted = doc.at("fitted").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed calibration model: ") + e.what());
  }
  if (model.rates.size() != model.n) throw ValidationError("calibration model rate count does not match n");
  return model;
}

CalibrationModel load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read calibration model " + path.string());
  return load_calibration(in);
}

}  // namespace tact
