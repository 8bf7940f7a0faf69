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

#include "grmcurate/rstar/rstar.hpp"

#include <unordered_map>

#include "grmcurate/client/segment.hpp"
#include "grmcurate/core/errors.hpp"
#include "grmcurate/core/jsonl.hpp"
#include "grmcurate/kernels/kernels.hpp"

namespace grmcurate::rstar {
namespace {

double span_mean(std::span<const double> probs, const char* name) {
  if (probs.empty()) throw DegenerateSpanError(std::string("empty ") + name + " span");
  if (!kernels::all_in_unit_interval(probs))
    throw ValidationError(std::string(name) + " probabilities must lie in [0,1]");
  return kernels::sum(probs) / static_cast<double>(probs.size());
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::NoCorrectSample:
      break;
  }
  return "NoCorrectSample";
}

}  // namespace

double self_consistency(std::span<const double> reasoning_probs) {
  return span_mean(reasoning_probs, "reasoning");
}

double validity(std::span<const double> answer_probs) {
  return span_mean(answer_probs, "answer");
}

RStarScore r_star(const GenerationRecord& rec) {
  if (!rec.correct())
    throw PreconditionError("R* is only defined for correct generations (example '" +
                            rec.example_id() + "', sample " +
                            std::to_string(rec.sample_index()) + ")");
  return RStarScore(self_consistency(rec.reasoning_probs()), validity(rec.answer_probs()));
}

Selection select_best(const GenerationGroup& group) {
  Selection best;
  for (const auto& s : group.samples()) {
    if (!s.correct()) continue;
    RStarScore score = r_star(s);
    // Strict comparison keeps the earliest sample on ties.
    if (!best.score || score.r_star() > best.score->r_star()) {
      best.chosen = &s;
      best.score = score;
    }
  }
  if (!best.chosen) best.rejected_reason = RejectReason::NoCorrectSample;
  return best;
}

nlohmann::json to_json(const SftRecord& rec) {
  return {{"id", rec.id},
          {"prompt", rec.prompt},
          {"completion", rec.completion},
          {"r_star", rec.score.r_star()},
          {"self_consistency", rec.score.self_consistency()},
          {"validity", rec.score.validity()}};
}

nlohmann::json to_json(const SftReject& rej) {
  return {{"id", rej.id},
          {"reason", to_string(rej.reason)},
          {"num_samples", rej.num_samples},
          {"num_correct", rej.num_correct}};
}

SftBuild build_sft_dataset(const std::vector<PreferenceExample>& examples,
                           const std::vector<GenerationGroup>& groups,
                           const client::PromptTemplate& tmpl) {
  std::unordered_map<std::string_view, const PreferenceExample*> by_id;
  by_id.reserve(examples.size());
  for (const auto& ex : examples) by_id.emplace(ex.id(), &ex);

  SftBuild out;
  for (const auto& group : groups) {
    auto it = by_id.find(group.example_id());
    if (it == by_id.end())
      throw JoinError("generation group for unknown example '" + group.example_id() + "'");
    const Selection sel = select_best(group);
    if (!sel.selected()) {
      out.rejects.push_back(
          {group.example_id(), *sel.rejected_reason, group.size(), group.correct_count()});
      continue;
    }
    out.records.push_back(SftRecord{
        group.example_id(), client::render_prompt(tmpl, *it->second),
        client::restore_completion(sel.chosen->reasoning_text(), sel.chosen->answer_text(),
                                   tmpl.segmentation()),
        *sel.score});
  }
  return out;
}

SftWriteSummary write_sft_dataset(const SftBuild& build, const std::filesystem::path& sft_path,
                                  const std::filesystem::path& rejects_path) {
  AtomicJsonlWriter sft(sft_path);
  AtomicJsonlWriter rejects(rejects_path);
  for (const auto& r : build.records) sft.write(to_json(r));
  for (const auto& r : build.rejects) rejects.write(to_json(r));
  SftWriteSummary summary;
  summary.records = sft.commit();
  summary.rejects = rejects.commit();
  return summary;
}

}  // namespace grmcurate::rstar
