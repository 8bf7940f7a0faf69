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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grmcurate/client/completion_client.hpp"
#include "grmcurate/client/prompt_template.hpp"
#include "grmcurate/core/codec.hpp"
#include "grmcurate/core/types.hpp"
#include "grmcurate/judge/verdict.hpp"

namespace grmcurate::evalbench {

inline constexpr std::string_view kDefaultCategory = "all";

struct EvalOutcome {
  std::string example_id;
  std::string category;
  judge::Verdict verdict;
  bool correct = false;
  bool position_swapped = false;
  std::optional<std::string> error;  // set when the endpoint never answered

  bool errored() const noexcept { return error.has_value(); }
  bool operator==(const EvalOutcome&) const = default;
};

struct EvalOptions {
  client::SamplingConfig sampling{.num_samples = 1, .temperature = 0.0, .max_tokens = 8192};
  bool swap_positions = true;
  judge::MatchPolicy match_policy = judge::MatchPolicy::First;
};

/// Judges one example (already swapped if needed) from a single completion.
/// Transport failures become an errored outcome rather than an exception.
EvalOutcome judge_example(client::CompletionClient& client, const PreferenceExample& ex,
                          const client::PromptTemplate& tmpl,
                          const judge::VerdictExtractor& extractor,
                          const client::SamplingConfig& sampling, bool position_swapped);

/// One outcome per example in input order, each followed by its swapped
/// counterpart when options.swap_positions is set. Requests fan out across
/// up to max_in_flight worker threads.
std::vector<EvalOutcome> evaluate(client::CompletionClient& client,
                                  const std::vector<PreferenceExample>& dataset,
                                  const client::PromptTemplate& tmpl,
                                  const EvalOptions& options);

struct CategoryStat {
  std::string category;
  std::size_t count = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;

  bool operator==(const CategoryStat&) const = default;
};

struct RunMetadata {
  std::string endpoint;
  std::string model;
  std::string template_hash;
  client::SamplingConfig sampling;
  bool swap_positions = false;
  std::string timestamp;

  bool operator==(const RunMetadata&) const = default;
};

struct BenchmarkReport {
  std::vector<CategoryStat> per_category;  // first-appearance order
  double macro_average = 0.0;
  double micro_average = 0.0;
  std::optional<double> position_consistency;  // absent without swapped pairs
  std::size_t scored = 0;
  std::size_t errored = 0;
  std::size_t attempted = 0;
  RunMetadata run_metadata;

  double errored_fraction() const noexcept {
    return attempted == 0 ? 0.0 : static_cast<double>(errored) / static_cast<double>(attempted);
  }
  bool operator==(const BenchmarkReport&) const = default;
};

/// Unweighted mean of per-category accuracies.
double macro_average(const std::vector<CategoryStat>& per_category);

/// Accuracy per category over non-swapped, non-errored outcomes; macro and
/// micro averages; and the fraction of examples whose two orderings pick the
/// same underlying response. Throws EmptyRunError when nothing was scored.
BenchmarkReport aggregate(const std::vector<EvalOutcome>& outcomes, RunMetadata metadata = {});

enum class ReportFormat { MarkdownTable, Json };

std::string render_report(const BenchmarkReport& report, ReportFormat format);

/// Best-of-N item: one best response against several inferior ones.
struct BestOfNInstance {
  std::string id;
  std::string prompt;
  std::string best;
  std::vector<std::string> inferior;
  std::optional<std::string> category;
};

BestOfNInstance best_of_n_from_json(const json& j);
std::vector<BestOfNInstance> load_best_of_n(const std::filesystem::path& path);

/// One pair per inferior response, id "<instance>::<j>". The best response
/// sits in slot A for even j and slot B for odd j.
std::vector<PreferenceExample> expand_best_of_n(const BestOfNInstance& instance);

/// Folds pair outcomes back to one outcome per instance and ordering: correct
/// only if every pair is correct, errored if any pair errored. Outcomes whose
/// id carries no "::" suffix pass through unchanged.
std::vector<EvalOutcome> collapse_best_of_n(const std::vector<EvalOutcome>& pair_outcomes);

}  // namespace grmcurate::evalbench

namespace grmcurate {

template <>
struct Codec<evalbench::EvalOutcome> {
  static json encode(const evalbench::EvalOutcome& o);
  static evalbench::EvalOutcome decode(const json& j);
};

template <>
struct Codec<evalbench::BenchmarkReport> {
  static json encode(const evalbench::BenchmarkReport& r);
  static evalbench::BenchmarkReport decode(const json& j);
};

}  // namespace grmcurate
