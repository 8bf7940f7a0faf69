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

#include <optional>
#include <string>

#include "grmcurate/client/segment.hpp"
#include "grmcurate/evalbench/evalbench.hpp"
#include "grmcurate/pipeline/config.hpp"

namespace grmcurate::pipeline {

enum class ExitCode : int {
  Ok = 0,
  Failure = 1,
  EmptyRun = 2,
  ExcessiveErrors = 3,
  EndpointUnreachable = 4,
  ConfigInvalid = 5,
};

/// Share of errored requests above which a run exits with ExcessiveErrors.
inline constexpr double kMaxErroredFraction = 0.10;

struct CommandResult {
  ExitCode code = ExitCode::Ok;
  std::string summary;  // one line, printed by the CLI
};

/// Builds one GenerationRecord from a sampled completion: segments it,
/// extracts the verdict and scores it against `label`. Completions that fail
/// to segment become Unparseable, incorrect records that keep their text.
GenerationRecord make_record(const std::string& example_id, std::size_t sample_index,
                             const client::Completion& completion,
                             const client::PromptTemplate& tmpl,
                             const judge::VerdictExtractor& extractor, Label label);

/// Samples, segments and judges a group per input example and writes
/// generations_<stage>.jsonl in input order. Completed example ids (in the
/// output or in its .partial progress log) are not requested again.
CommandResult cmd_generate(const PipelineConfig& cfg, Stage stage);

/// Selects the best correct rationale per example and writes sft.jsonl and
/// sft_rejects.jsonl.
CommandResult cmd_score_select(const PipelineConfig& cfg);

/// Gates the stage's groups and writes the trainer batch and the skip log.
CommandResult cmd_rl_export(const PipelineConfig& cfg, Stage stage);

/// Writes hard.jsonl from the hard-mining generations.
CommandResult cmd_mine_hard(const PipelineConfig& cfg);

/// Evaluates the eval endpoint on the eval dataset (or best-of-n file when
/// `best_of_n`), writing outcomes, report.json and report.md. Outcomes already
/// on disk are reused.
CommandResult cmd_eval(const PipelineConfig& cfg, bool best_of_n = false);

/// Re-aggregates eval_outcomes.jsonl and renders the report text.
CommandResult cmd_report(const PipelineConfig& cfg, evalbench::ReportFormat format,
                         std::string& rendered);

}  // namespace grmcurate::pipeline
