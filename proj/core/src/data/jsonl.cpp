#include "tact/data/jsonl.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "tact/error.hpp"

namespace tact {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

/// Shares identical raw vectors between item records.
class RawInterner {
 public:
  std::shared_ptr<const RawFeatures> intern(RawFeatures raw) {
    std::uint64_t h = kFnvOffset;
    for (double v : raw) h = fnv1a(h, std::bit_cast<std::uint64_t>(v));
    auto& bucket = table_[h];
    for (const auto& existing : bucket) {
      if (*existing == raw) return existing;
    }
    bucket.push_back(std::make_shared<const RawFeatures>(std::move(raw)));
    return bucket.back();
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<std::shared_ptr<const RawFeatures>>> table_;
};

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

int index_field(const json& obj, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return it->get<int>();
}

ItemRecord parse_item(const json& obj, const SchemaConfig& schema, RawInterner& interner) {
  if (!obj.is_object()) throw ValidationError("item must be a JSON object");
  const json& raw = require(obj, "raw");
  if (!raw.is_array() || raw.size() != schema.raw_dim) {
    throw ValidationError("raw feature vector must have arity " + std::to_string(schema.raw_dim) +
                          ", got " + std::to_string(raw.is_array() ? raw.size() : 0));
  }
  ItemRecord item;
  item.raw = interner.intern(raw.get<RawFeatures>());
  const json& t_a = require(obj, "t_a");
  const std::int64_t absolute = t_a.get<std::int64_t>();
  item.time = decompose_timestamp(absolute);
  item.time.month = index_field(obj, "t_m", item.time.month);
  item.time.week = index_field(obj, "t_w", item.time.week);
  item.time.day = index_field(obj, "t_d", item.time.day);
  item.time.hour = index_field(obj, "t_h", item.time.hour);
  if (!in_range(item.time)) throw ValidationError("explicit time index out of range");
  const std::int64_t cid3 = require(obj, "cid3").get<std::int64_t>();
  if (cid3 < 0) throw ValidationError("cid3 must be non-negative");
  item.cid3 = static_cast<std::uint32_t>(cid3);
  if (auto it = obj.find("item"); it != obj.end()) item.item_id = it->get<std::int64_t>();
  if (auto it = obj.find("pad"); it != obj.end()) item.padding = it->get<bool>();
  return item;
}

std::uint64_t history_identity(const Sample& s) {
  std::uint64_t h = kFnvOffset;
  for (const ItemRecord& item : s.history) {
    h = fnv1a(h, static_cast<std::uint64_t>(item.time.absolute));
    h = fnv1a(h, item.cid3);
    for (double v : *item.raw) h = fnv1a(h, std::bit_cast<std::uint64_t>(v));
  }
  return h;
}

Sample parse_sample(const json& obj, const SchemaConfig& schema, RawInterner& interner) {
  if (!obj.is_object()) throw ValidationError("line is not a JSON object");
  Sample s;
  s.label = require(obj, "label").get<int>();
  if (s.label != 0 && s.label != 1) throw ValidationError("label must be 0 or 1");
  s.aux = require(obj, "aux").get<std::vector<double>>();
  s.target = parse_item(require(obj, "target"), schema, interner);

  const json& history = require(obj, "history");
  if (!history.is_array()) throw ValidationError("history must be an array");
  if (history.size() > schema.history_length ||
      (history.size() < schema.history_length && !schema.pad_short_history)) {
    throw ValidationError("history length must be " + std::to_string(schema.history_length) + ", got " +
                          std::to_string(history.size()));
  }
  const std::size_t pad = schema.history_length - history.size();
  s.history.reserve(schema.history_length);
  for (std::size_t i = 0; i < pad; ++i) s.history.push_back(ItemRecord::null_item(s.target.time, schema.raw_dim));
  for (const json& item : history) s.history.push_back(parse_item(item, schema, interner));

  if (auto it = obj.find("user"); it != obj.end()) {
    s.user = it->get<std::uint64_t>();
  } else {
    s.user = history_identity(s);
  }
  return s;
}

json item_to_json(const ItemRecord& item) {
  json obj;
  obj["raw"] = *item.raw;
  obj["t_a"] = item.time.absolute;
  obj["cid3"] = item.cid3;
  const TimeSignals derived = decompose_timestamp(item.time.absolute);
  if (item.time.month != derived.month) obj["t_m"] = item.time.month;
  if (item.time.week != derived.week) obj["t_w"] = item.time.week;
  if (item.time.day != derived.day) obj["t_d"] = item.time.day;
  if (item.time.hour != derived.hour) obj["t_h"] = item.time.hour;
  if (item.item_id >= 0) obj["item"] = item.item_id;
  if (item.padding) obj["pad"] = true;
  return obj;
}

}  // namespace

Dataset parse_jsonl(std::istream& in, const SchemaConfig& schema) {
  DatasetInfo info;
  info.history_length = schema.history_length;
  info.raw_dim = schema.raw_dim;
  Dataset ds(info);

  RawInterner interner;
  std::optional<std::size_t> aux_dim = schema.aux_dim;
  std::uint32_t max_cid3 = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Sample s = parse_sample(json::parse(line), schema, interner);
      if (!aux_dim) aux_dim = s.aux.size();
      if (s.aux.size() != *aux_dim) {
        throw ValidationError("aux must have " + std::to_string(*aux_dim) + " values, got " +
                              std::to_string(s.aux.size()));
      }
      auto check_cid3 = [&](const ItemRecord& item) {
        if (schema.category_vocab && item.cid3 >= *schema.category_vocab) {
          throw ValidationError("cid3 " + std::to_string(item.cid3) + " outside vocabulary of size " +
                                std::to_string(*schema.category_vocab));
        }
        max_cid3 = std::max(max_cid3, item.cid3);
      };
      check_cid3(s.target);
      for (const ItemRecord& item : s.history) check_cid3(item);
      ds.add(std::move(s));
    } catch (const json::exception& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    } catch (const Error& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  ds.info().aux_dim = aux_dim.value_or(0);
  ds.info().category_vocab = schema.category_vocab.value_or(static_cast<std::size_t>(max_cid3) + 1);

  std::size_t index = 0;
  ds.for_each([&](const Sample& s) {
    ++index;
    try {
      validate_sample(s, ds.info());
    } catch (const ValidationError& e) {
      throw ValidationError("sample " + std::to_string(index) + ": " + e.what());
    }
  });
  return ds;
}

Dataset load_jsonl(const std::filesystem::path& path, const SchemaConfig& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file " + path.string());
  try {
    return parse_jsonl(in, schema);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_jsonl(std::ostream& out, const Dataset& ds) {
  ds.for_each([&](const Sample& s) {
    json obj;
    obj["label"] = s.label;
    obj["user"] = s.user;
    obj["aux"] = s.aux;
    obj["target"] = item_to_json(s.target);
    json history = json::array();
    for (const ItemRecord& item : s.history) history.push_back(item_to_json(item));
    obj["history"] = std::move(history);
    out << obj.dump() << '\n';
  });
}

void write_jsonl(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write dataset file " + path.string());
  write_jsonl(out, ds);
}

}  // namespace tact
