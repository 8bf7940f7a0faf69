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

#include <spdlog/spdlog.h>

#include "grmcurate/core/errors.hpp"
#include "grmcurate/core/parallel.hpp"
#include "grmcurate/evalbench/evalbench.hpp"

namespace grmcurate::evalbench {

EvalOutcome judge_example(client::CompletionClient& client, const PreferenceExample& ex,
                          const client::PromptTemplate& tmpl,
                          const judge::VerdictExtractor& extractor,
                          const client::SamplingConfig& sampling, bool position_swapped) {
  EvalOutcome out;
  out.example_id = ex.id();
  out.category = ex.category().value_or(std::string(kDefaultCategory));
  out.position_swapped = position_swapped;
  try {
    auto completions = client.sample_generations(client::render_prompt(tmpl, ex), sampling);
    try {
      const auto seg = client::segment(completions.front(), tmpl);
      out.verdict = extractor.extract(seg.answer_text);
    } catch (const SegmentationError&) {
      out.verdict = judge::Verdict::unparseable();
    }
    out.correct = judge::is_equivalent(out.verdict, ex.label());
  } catch (const TransportError& e) {
    spdlog::warn("example '{}'{}: {}", ex.id(), position_swapped ? " (swapped)" : "", e.what());
    out.error = e.unreachable() ? "unreachable: " + std::string(e.what()) : e.what();
  } catch (const ConfigError& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<EvalOutcome> evaluate(client::CompletionClient& client,
                                  const std::vector<PreferenceExample>& dataset,
                                  const client::PromptTemplate& tmpl,
                                  const EvalOptions& options) {
  const judge::VerdictExtractor extractor(tmpl.answer_pattern(), options.match_policy);
  const std::size_t per_example = options.swap_positions ? 2 : 1;
  std::vector<EvalOutcome> outcomes(dataset.size() * per_example);
  parallel_for(outcomes.size(), static_cast<std::size_t>(client.endpoint().max_in_flight),
               [&](std::size_t slot) {
                 const PreferenceExample& ex = dataset[slot / per_example];
                 const bool swapped = slot % per_example == 1;
                 outcomes[slot] = swapped ? judge_example(client, ex.swapped(), tmpl, extractor,
                                                          options.sampling, true)
                                          : judge_example(client, ex, tmpl, extractor,
                                                          options.sampling, false);
               });
  return outcomes;
}

}  // namespace grmcurate::evalbench

namespace grmcurate {

json Codec<evalbench::EvalOutcome>::encode(const evalbench::EvalOutcome& o) {
  json j = {{"example_id", o.example_id},
            {"category", o.category},
            {"verdict", to_string(o.verdict.choice)},
            {"correct", o.correct},
            {"position_swapped", o.position_swapped}};
  if (o.verdict.raw_match) j["raw_match"] = *o.verdict.raw_match;
  if (o.error) j["error"] = *o.error;
  return j;
}

evalbench::EvalOutcome Codec<evalbench::EvalOutcome>::decode(const json& j) {
  evalbench::EvalOutcome o;
  try {
    o.example_id = j.at("example_id").get<std::string>();
    o.category = j.at("category").get<std::string>();
    o.verdict.choice = parse_verdict_choice(j.at("verdict").get<std::string>());
    if (j.contains("raw_match")) o.verdict.raw_match = j["raw_match"].get<std::string>();
    o.correct = j.at("correct").get<bool>();
    o.position_swapped = j.at("position_swapped").get<bool>();
    if (j.contains("error")) o.error = j["error"].get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("eval outcome: ") + e.what());
  }
  if ((o.verdict.choice == VerdictChoice::Unparseable) == o.verdict.raw_match.has_value())
    throw ValidationError("eval outcome '" + o.example_id +
                          "': raw_match must be present exactly when the verdict parsed");
  if (o.correct && (o.errored() || o.verdict.choice == VerdictChoice::Unparseable))
    throw ValidationError("eval outcome '" + o.example_id + "' cannot be correct");
  return o;
}

}  // namespace grmcurate
