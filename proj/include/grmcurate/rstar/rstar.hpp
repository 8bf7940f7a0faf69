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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "grmcurate/client/prompt_template.hpp"
#include "grmcurate/core/types.hpp"

namespace grmcurate::rstar {

/// Mean token probability over the reasoning span. Throws
/// DegenerateSpanError on an empty span and ValidationError on values
/// outside [0,1].
double self_consistency(std::span<const double> reasoning_probs);

/// Mean token probability over the answer span.
double validity(std::span<const double> answer_probs);

/// Self-consistency times validity. Only defined for correct records;
/// anything else throws PreconditionError.
RStarScore r_star(const GenerationRecord& rec);

enum class RejectReason { NoCorrectSample };

struct Selection {
  const GenerationRecord* chosen = nullptr;  // points into the scored group
  std::optional<RStarScore> score;
  std::optional<RejectReason> rejected_reason;

  bool selected() const noexcept { return chosen != nullptr; }
};

/// Highest-R* correct sample; ties go to the lowest sample_index. The result
/// borrows from `group`.
Selection select_best(const GenerationGroup& group);

struct SftRecord {
  std::string id;
  std::string prompt;
  std::string completion;
  RStarScore score;
};

struct SftReject {
  std::string id;
  RejectReason reason;
  std::size_t num_samples;
  std::size_t num_correct;
};

nlohmann::json to_json(const SftRecord& rec);
nlohmann::json to_json(const SftReject& rej);

struct SftBuild {
  std::vector<SftRecord> records;
  std::vector<SftReject> rejects;
};

/// One SFT record per group with a selection, in group order; groups with no
/// correct sample go to `rejects`. Throws JoinError when a group names an
/// example that is not in `examples`.
SftBuild build_sft_dataset(const std::vector<PreferenceExample>& examples,
                           const std::vector<GenerationGroup>& groups,
                           const client::PromptTemplate& tmpl);

struct SftWriteSummary {
  std::size_t records = 0;
  std::size_t rejects = 0;
};

SftWriteSummary write_sft_dataset(const SftBuild& build, const std::filesystem::path& sft_path,
                                  const std::filesystem::path& rejects_path);

}  // namespace grmcurate::rstar
