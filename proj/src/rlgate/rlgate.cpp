// Copyright 2026 The grmcurate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "grmcurate/rlgate/rlgate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "grmcurate/core/codec.hpp"
#include "grmcurate/core/errors.hpp"
#include "grmcurate/core/jsonl.hpp"
#include "grmcurate/kernels/kernels.hpp"

namespace grmcurate::rlgate {
namespace {

using ExampleIndex = std::unordered_map<std::string_view, const PreferenceExample*>;

ExampleIndex index_examples(const std::vector<PreferenceExample>& examples) {
  ExampleIndex idx;
  idx.reserve(examples.size());
  for (const auto& ex : examples) idx.emplace(ex.id(), &ex);
  return idx;
}

const PreferenceExample& lookup(const ExampleIndex& idx, const std::string& id) {
  auto it = idx.find(id);
  if (it == idx.end()) throw JoinError("generation group for unknown example '" + id + "'");
  return *it->second;
}

}  // namespace

std::string_view to_string(GateAction action) noexcept {
  switch (action) {
    case GateAction::SkipAllCorrect:
      return "SkipAllCorrect";
    case GateAction::SkipAllIncorrect:
      return "SkipAllIncorrect";
    case GateAction::Update:
      break;
  }
  return "Update";
}

GateAction decide(std::size_t correct_count, std::size_t group_size) {
  if (group_size == 0 || correct_count > group_size)
    throw ValidationError("correct_count must lie in [0, group_size] with group_size >= 1");
  if (correct_count == 0) return GateAction::SkipAllIncorrect;
  if (correct_count == group_size) return GateAction::SkipAllCorrect;
  return GateAction::Update;
}

GateDecision gate(const GenerationGroup& group) {
  return {group.example_id(), group.correct_count(), group.size(),
          decide(group.correct_count(), group.size())};
}

AdvantageGroup group_advantages(const GenerationGroup& group) {
  const GateAction action = decide(group.correct_count(), group.size());
  if (action != GateAction::Update)
    throw PreconditionError("advantages requested for group '" + group.example_id() +
                            "' gated " + std::string(to_string(action)));
  std::vector<double> rewards;
  rewards.reserve(group.size());
  for (const auto& s : group.samples()) rewards.push_back(outcome_reward(s));
  const double n = static_cast<double>(rewards.size());
  const double mean = kernels::sum(rewards) / n;
  const double sd = std::sqrt(kernels::sum_squared_deviations(rewards, mean) / n);
  const double scale = std::max(sd, kAdvantageEpsilon);

  AdvantageGroup out{group.example_id(), {}};
  out.items.reserve(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    out.items.push_back({group.samples()[i].sample_index(), static_cast<int>(rewards[i]),
                         (rewards[i] - mean) / scale});
  }
  return out;
}

nlohmann::json to_json(const HardCase& hc) {
  nlohmann::json j = Codec<PreferenceExample>::encode(hc.example);
  j["correct_count"] = hc.correct_count;
  j["num_samples"] = hc.num_samples;
  return j;
}

HardCase hard_case_from_json(const nlohmann::json& j) {
  return {Codec<PreferenceExample>::decode(j), j.at("correct_count").get<std::size_t>(),
          j.at("num_samples").get<std::size_t>()};
}

std::vector<HardCase> mine_hard_cases(const std::vector<PreferenceExample>& examples,
                                      const std::vector<GenerationGroup>& groups,
                                      const MiningOptions& options) {
  const auto idx = index_examples(examples);
  std::vector<HardCase> out;
  for (const auto& g : groups) {
    if (g.size() != options.group_size)
      throw ConfigError("group '" + g.example_id() + "' has " + std::to_string(g.size()) +
                        " samples, expected rl.group_size = " +
                        std::to_string(options.group_size));
    const PreferenceExample& ex = lookup(idx, g.example_id());
    if (g.correct_count() == g.size()) continue;
    if (options.exclude_all_incorrect && g.correct_count() == 0) continue;
    out.push_back({ex, g.correct_count(), g.size()});
  }
  return out;
}

nlohmann::json to_json(const GateDecision& d) {
  return {{"example_id", d.example_id},
          {"correct_count", d.correct_count},
          {"group_size", d.group_size},
          {"action", to_string(d.action)}};
}

RlExport export_rl_batch(const std::vector<PreferenceExample>& examples,
                         const std::vector<GenerationGroup>& groups,
                         const client::PromptTemplate& tmpl) {
  const auto idx = index_examples(examples);
  RlExport out;
  for (const auto& g : groups) {
    const PreferenceExample& ex = lookup(idx, g.example_id());
    GateDecision d = gate(g);
    switch (d.action) {
      case GateAction::Update:
        ++out.stats.update;
        break;
      case GateAction::SkipAllCorrect:
        ++out.stats.skip_all_correct;
        break;
      case GateAction::SkipAllIncorrect:
        ++out.stats.skip_all_incorrect;
        break;
    }
    if (d.action != GateAction::Update) {
      out.skipped.push_back(std::move(d));
      continue;
    }
    const AdvantageGroup adv = group_advantages(g);
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t i = 0; i < adv.items.size(); ++i) {
      samples.push_back({{"text", g.samples()[i].full_text()},
                         {"reward", adv.items[i].reward},
                         {"advantage", adv.items[i].advantage}});
    }
    out.batch.push_back({{"example_id", g.example_id()},
                         {"prompt", client::render_prompt(tmpl, ex)},
                         {"samples", std::move(samples)}});
  }
  return out;
}

void write_rl_export(const RlExport& exp, const std::filesystem::path& batch_path,
                     const std::filesystem::path& skip_path) {
  AtomicJsonlWriter batch(batch_path);
  AtomicJsonlWriter skips(skip_path);
  for (const auto& line : exp.batch) batch.write(line);
  for (const auto& d : exp.skipped) skips.write(to_json(d));
  batch.commit();
  skips.commit();
}

}  // namespace grmcurate::rlgate
