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

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grmcurate/client/prompt_template.hpp"
#include "grmcurate/core/types.hpp"

namespace grmcurate::rlgate {

/// Floor on the standard deviation in the advantage denominator.
inline constexpr double kAdvantageEpsilon = 1e-6;

enum class GateAction { Update, SkipAllCorrect, SkipAllIncorrect };

std::string_view to_string(GateAction action) noexcept;

struct GateDecision {
  std::string example_id;
  std::size_t correct_count = 0;
  std::size_t group_size = 0;
  GateAction action = GateAction::Update;

  bool operator==(const GateDecision&) const = default;
};

/// 1 for a correct generation, 0 otherwise (including unparseable ones).
inline int outcome_reward(const GenerationRecord& rec) noexcept { return rec.correct() ? 1 : 0; }

/// Update iff 0 < correct_count < group_size.
GateAction decide(std::size_t correct_count, std::size_t group_size);
GateDecision gate(const GenerationGroup& group);

struct AdvantageItem {
  std::size_t sample_index = 0;
  int reward = 0;
  double advantage = 0.0;
};

struct AdvantageGroup {
  std::string example_id;
  std::vector<AdvantageItem> items;
};

/// advantage_i = (reward_i - mean) / max(std, epsilon) with the population
/// standard deviation. Throws PreconditionError unless the group gates to
/// Update.
AdvantageGroup group_advantages(const GenerationGroup& group);

struct HardCase {
  PreferenceExample example;
  std::size_t correct_count = 0;
  std::size_t num_samples = 0;
};

nlohmann::json to_json(const HardCase& hc);
HardCase hard_case_from_json(const nlohmann::json& j);

struct MiningOptions {
  std::size_t group_size = 8;
  bool exclude_all_incorrect = false;
};

/// Examples whose N resampled verdicts are not all correct, in group order.
/// Throws ConfigError when a group's size differs from options.group_size and
/// JoinError when a group names an unknown example.
std::vector<HardCase> mine_hard_cases(const std::vector<PreferenceExample>& examples,
                                      const std::vector<GenerationGroup>& groups,
                                      const MiningOptions& options);

struct GateStats {
  std::size_t update = 0;
  std::size_t skip_all_correct = 0;
  std::size_t skip_all_incorrect = 0;
  std::size_t total() const noexcept { return update + skip_all_correct + skip_all_incorrect; }
};

struct RlExport {
  std::vector<nlohmann::json> batch;  // one line per Update-gated group
  std::vector<GateDecision> skipped;
  GateStats stats;
};

nlohmann::json to_json(const GateDecision& d);

/// Gates every group; Update groups become trainer lines
/// {example_id, prompt, samples:[{text, reward, advantage}]}, the rest land in
/// the skip log. Throws JoinError for groups of unknown examples.
RlExport export_rl_batch(const std::vector<PreferenceExample>& examples,
                         const std::vector<GenerationGroup>& groups,
                         const client::PromptTemplate& tmpl);

void write_rl_export(const RlExport& exp, const std::filesystem::path& batch_path,
                     const std::filesystem::path& skip_path);

}  // namespace grmcurate::rlgate
