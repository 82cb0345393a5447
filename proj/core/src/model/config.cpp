#include "tact/model/config.hpp"

#include <cstdio>
#include <sstream>

#include "tact/error.hpp"

namespace tact {

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string("model ") + name + " must be positive");
  };
  positive(raw_dim, "raw_dim");
  positive(category_vocab, "category_vocab");
  positive(onehot_dim, "onehot_dim");
  positive(ff_width, "ff_width");
  positive(item_dim, "item_dim");
  positive(hidden_dim, "hidden_dim");
  positive(gru_layers, "gru_layers");
  positive(attention_dim, "attention_dim");
  positive(aux_dim, "aux_dim");
  positive(history_length, "history_length");
  if (item_dim % 2 != 0) {
    throw ConfigError("model item_dim must be even for the relative-time encoding, got " +
                      std::to_string(item_dim));
  }
}

ModelConfig ModelConfig::for_dataset(const DatasetInfo& info, ModelConfig base) {
  base.raw_dim = info.raw_dim;
  base.category_vocab = info.category_vocab;
  base.aux_in = info.aux_dim;
  base.history_length = info.history_length;
  return base;
}

ModelConfig ModelConfig::for_dataset(const DatasetInfo& info) { return for_dataset(info, ModelConfig{}); }

ModelConfig ModelConfig::from_key_values(const KeyValueConfig& kv) { return from_key_values(kv, ModelConfig{}); }

KeyValueConfig ModelConfig::to_key_values() const {
  KeyValueConfig kv;
  kv.set("raw_dim", static_cast<std::uint64_t>(raw_dim));
  kv.set("category_vocab", static_cast<std::uint64_t>(category_vocab));
  kv.set("onehot_dim", static_cast<std::uint64_t>(onehot_dim));
  kv.set("ff_width", static_cast<std::uint64_t>(ff_width));
  kv.set("item_dim", static_cast<std::uint64_t>(item_dim));
  kv.set("hidden_dim", static_cast<std::uint64_t>(hidden_dim));
  kv.set("gru_layers", static_cast<std::uint64_t>(gru_layers));
  kv.set("attention_dim", static_cast<std::uint64_t>(attention_dim));
  kv.set("aux_in", static_cast<std::uint64_t>(aux_in));
  kv.set("aux_dim", static_cast<std::uint64_t>(aux_dim));
  kv.set("history_length", static_cast<std::uint64_t>(history_length));
  kv.set("time_aware", time_aware);
  return kv;
}

ModelConfig ModelConfig::from_key_values(const KeyValueConfig& kv, ModelConfig c) {
  c.raw_dim = kv.get_uint("raw_dim", c.raw_dim);
  c.category_vocab = kv.get_uint("category_vocab", c.category_vocab);
  c.onehot_dim = kv.get_uint("onehot_dim", c.onehot_dim);
  c.ff_width = kv.get_uint("ff_width", c.ff_width);
  c.item_dim = kv.get_uint("item_dim", c.item_dim);
  c.hidden_dim = kv.get_uint("hidden_dim", c.hidden_dim);
  c.gru_layers = kv.get_uint("gru_layers", c.gru_layers);
  c.attention_dim = kv.get_uint("attention_dim", c.attention_dim);
  c.aux_in = kv.get_uint("aux_in", c.aux_in);
  c.aux_dim = kv.get_uint("aux_dim", c.aux_dim);
  c.history_length = kv.get_uint("history_length", c.history_length);
  c.time_aware = kv.get_bool("time_aware", c.time_aware);
  return c;
}

std::uint64_t ModelConfig::hash() const {
  std::ostringstream out;
  to_key_values().write(out);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : out.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ModelConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace tact
