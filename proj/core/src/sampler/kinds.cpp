#include "tact/sampler/kinds.hpp"

#include <string>

#include "tact/error.hpp"

namespace tact {

namespace {

struct Entry {
  SamplerKind kind;
  std::string_view name;
};

constexpr Entry kEntries[] = {
    {SamplerKind::Uniform, "uniform"},
    {SamplerKind::UnderSample, "under_sample_1to5"},
    {SamplerKind::UserFixed, "user_fixed"},
    {SamplerKind::Pointwise, "pointwise"},
    {SamplerKind::Rgan, "rgan"},
    {SamplerKind::RganScoreOnly, "rgan_score_only"},
    {SamplerKind::RganPenaltyOnly, "rgan_penalty_only"},
    {SamplerKind::IrganStyle, "irgan_style"},
};

}  // namespace

std::string_view sampler_name(SamplerKind kind) {
  for (const Entry& e : kEntries) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

SamplerKind parse_sampler_kind(std::string_view name) {
  for (const Entry& e : kEntries) {
    if (e.name == name) return e.kind;
  }
  std::string known;
  for (const Entry& e : kEntries) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw ConfigError("unknown sampler '" + std::string(name) + "' (expected one of " + known + ")");
}

const std::vector<SamplerKind>& all_sampler_kinds() {
  static const std::vector<SamplerKind> kinds = [] {
    std::vector<SamplerKind> out;
    for (const Entry& e : kEntries) out.push_back(e.kind);
    return out;
  }();
  return kinds;
}

bool uses_generator(SamplerKind kind) {
  return kind == SamplerKind::Rgan || kind == SamplerKind::RganScoreOnly || kind == SamplerKind::RganPenaltyOnly ||
         kind == SamplerKind::IrganStyle;
}

bool uses_pointwise_loss(SamplerKind kind) {
  return kind == SamplerKind::UnderSample || kind == SamplerKind::Pointwise;
}

RewardConfig reward_config_for(SamplerKind kind, double lambda_item, double lambda_history) {
  RewardConfig r;
  r.lambda_item = lambda_item;
  r.lambda_history = lambda_history;
  switch (kind) {
    case SamplerKind::RganScoreOnly:
      r.lambda_item = r.lambda_history = 0.0;
      break;
    case SamplerKind::RganPenaltyOnly:
      r.include_score = false;
      break;
    case SamplerKind::IrganStyle:
      r.mode = RewardMode::WithoutNegatives;
      r.lambda_history = 0.0;
      break;
    default:
      break;
  }
  return r;
}

}  // namespace tact
