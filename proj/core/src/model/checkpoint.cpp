#include "tact/model/checkpoint.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "tact/error.hpp"

namespace tact {

namespace {

constexpr const char* kFormat = "tact-checkpoint";

void write_values(std::ostream& out, const Tensor& t) {
  out << '[';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) out << ',';
    out << t[i];
  }
  out << ']';
}

}  // namespace

void save_checkpoint(std::ostream& out, const Network& net) {
  nlohmann::json config = nlohmann::json::object();
  const KeyValueConfig kv = net.config().to_key_values();
  for (const auto& [key, value] : kv.entries()) config[key] = value;

  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << "{\"format\":\"" << kFormat << "\",\"version\":1,\"config\":" << config.dump() << ",\"parameters\":[\n";
  const auto params = net.parameters();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Parameter& p = *params[k];
    out << "{\"name\":\"" << p.name << "\",\"shape\":[";
    for (std::size_t a = 0; a < p.value.shape().rank(); ++a) out << (a > 0 ? "," : "") << p.value.shape()[a];
    out << "],\"values\":";
    write_values(out, p.value);
    out << '}' << (k + 1 < params.size() ? ",\n" : "\n");
  }
  out << "]}\n";
  out.precision(old_precision);
}

void save_checkpoint(const std::filesystem::path& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  save_checkpoint(out, net);
}

Network load_checkpoint(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (doc.value("format", "") != kFormat) throw ValidationError("not a tact checkpoint");
  KeyValueConfig kv;
  for (const auto& [key, value] : doc.at("config").items()) kv.set(key, value.get<std::string>());
  ModelConfig config = ModelConfig::from_key_values(kv);
  Network net(config, 0);

  const auto& entries = doc.at("parameters");
  auto params = net.parameters();
  if (entries.size() != params.size()) {
    throw ValidationError("checkpoint has " + std::to_string(entries.size()) + " parameters, model expects " +
                          std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& entry = entries[k];
    Parameter& p = *params[k];
    if (entry.at("name").get<std::string>() != p.name) {
      throw ValidationError("checkpoint parameter '" + entry.at("name").get<std::string>() + "' where '" + p.name +
                            "' was expected");
    }
    const auto values = entry.at("values").get<std::vector<double>>();
    if (values.size() != p.value.size()) throw ValidationError("checkpoint parameter '" + p.name + "' has wrong size");
    std::copy(values.begin(), values.end(), p.value.data());
  }
  return net;
}

Network load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace tact
