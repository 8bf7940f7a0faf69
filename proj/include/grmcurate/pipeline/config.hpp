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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grmcurate/client/prompt_template.hpp"
#include "grmcurate/core/types.hpp"
#include "grmcurate/judge/verdict.hpp"

namespace grmcurate::pipeline {

/// Sampling stages of the curation workflow plus the evaluation run.
enum class Stage { Zero, SftCuration, HardMining, Eval };

std::string_view to_string(Stage stage) noexcept;
Stage parse_stage(std::string_view text);  // throws ConfigError

struct PipelineFlags {
  bool exclude_all_incorrect = false;
  bool swap_positions = true;
  bool fail_fast = false;
};

struct PipelineConfig {
  std::map<Stage, ModelEndpoint> endpoints;
  std::map<Stage, client::SamplingConfig> sampling;
  client::PromptTemplate tmpl = client::default_template();
  judge::MatchPolicy match_policy = judge::MatchPolicy::First;
  PipelineFlags flags;
  std::size_t rl_group_size = 8;
  std::optional<std::string> report_timestamp;

  std::filesystem::path dataset;                          // training preference JSONL
  std::map<Stage, std::filesystem::path> stage_datasets;  // per-stage overrides
  std::filesystem::path eval_dataset;
  std::filesystem::path out_dir = "out";

  Stage score_select_stage = Stage::SftCuration;
  Stage mine_hard_stage = Stage::HardMining;

  const ModelEndpoint& endpoint(Stage stage) const;  // throws ConfigError if absent
  client::SamplingConfig sampling_for(Stage stage) const;
  std::filesystem::path dataset_for(Stage stage) const;

  std::filesystem::path generations_path(Stage stage) const;
  std::filesystem::path sft_path() const { return out_dir / "sft.jsonl"; }
  std::filesystem::path sft_rejects_path() const { return out_dir / "sft_rejects.jsonl"; }
  std::filesystem::path rl_export_path(Stage stage) const;
  std::filesystem::path rl_skips_path(Stage stage) const;
  std::filesystem::path hard_path() const { return out_dir / "hard.jsonl"; }
  std::filesystem::path eval_outcomes_path() const { return out_dir / "eval_outcomes.jsonl"; }
  std::filesystem::path report_json_path() const { return out_dir / "report.json"; }
  std::filesystem::path report_md_path() const { return out_dir / "report.md"; }

  /// Full validation: endpoints, sampling, group size and that no input path
  /// coincides with an output path. Throws ConfigError.
  void validate() const;
};

using Environment = std::map<std::string, std::string>;

/// Snapshot of the GRMCURATE_* process environment variables.
Environment process_environment();

/// Parses `key = value` lines ('#' starts a comment). Relative paths resolve
/// against the config file's directory. Environment overrides:
/// GRMCURATE_BASE_URL / GRMCURATE_API_KEY for every stage, and
/// GRMCURATE_<STAGE>_BASE_URL / GRMCURATE_<STAGE>_API_KEY for one stage.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const Environment& env = {});

PipelineConfig load_config(const std::filesystem::path& path, const Environment& env);

}  // namespace grmcurate::pipeline
