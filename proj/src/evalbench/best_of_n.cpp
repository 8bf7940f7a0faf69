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

#include <map>

#include "grmcurate/core/errors.hpp"
#include "grmcurate/core/jsonl.hpp"
#include "grmcurate/evalbench/evalbench.hpp"

namespace grmcurate::evalbench {
namespace {

constexpr std::string_view kPairSeparator = "::";

}  // namespace

BestOfNInstance best_of_n_from_json(const json& j) {
  BestOfNInstance inst;
  try {
    inst.id = j.at("id").get<std::string>();
    inst.prompt = j.at("prompt").get<std::string>();
    inst.best = j.at("chosen").get<std::string>();
    inst.inferior = j.at("rejected").get<std::vector<std::string>>();
    if (j.contains("category") && !j["category"].is_null())
      inst.category = j["category"].get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("best-of-n instance: ") + e.what());
  }
  if (inst.id.find(kPairSeparator) != std::string::npos)
    throw ValidationError("best-of-n id '" + inst.id + "' contains reserved \"::\"");
  if (inst.inferior.empty())
    throw ValidationError("best-of-n instance '" + inst.id + "' has no rejected responses");
  return inst;
}

std::vector<BestOfNInstance> load_best_of_n(const std::filesystem::path& path) {
  JsonlReader reader(path);
  std::vector<BestOfNInstance> out;
  while (auto line = reader.next()) {
    try {
      out.push_back(best_of_n_from_json(line->second));
    } catch (const ValidationError& e) {
      throw SchemaError(line->first, e.what());
    }
  }
  return out;
}

std::vector<PreferenceExample> expand_best_of_n(const BestOfNInstance& inst) {
  std::vector<PreferenceExample> pairs;
  pairs.reserve(inst.inferior.size());
  for (std::size_t j = 0; j < inst.inferior.size(); ++j) {
    const bool best_first = j % 2 == 0;
    pairs.emplace_back(inst.id + std::string(kPairSeparator) + std::to_string(j), inst.prompt,
                       best_first ? inst.best : inst.inferior[j],
                       best_first ? inst.inferior[j] : inst.best,
                       best_first ? Label::A : Label::B, inst.category, "bon:" + inst.id);
  }
  return pairs;
}

std::vector<EvalOutcome> collapse_best_of_n(const std::vector<EvalOutcome>& pair_outcomes) {
  std::vector<EvalOutcome> out;
  std::map<std::pair<std::string, bool>, std::size_t> slot;
  for (const auto& o : pair_outcomes) {
    const auto sep = o.example_id.rfind(kPairSeparator);
    if (sep == std::string::npos) {
      out.push_back(o);
      continue;
    }
    const std::string instance = o.example_id.substr(0, sep);
    auto [it, fresh] = slot.try_emplace({instance, o.position_swapped}, out.size());
    if (fresh) {
      EvalOutcome folded = o;
      folded.example_id = instance;
      out.push_back(std::move(folded));
      continue;
    }
    EvalOutcome& folded = out[it->second];
    if (o.errored() && !folded.errored()) folded.error = o.error;
    if (!o.correct) {
      folded.correct = false;
      folded.verdict = o.verdict;
    }
    if (folded.errored()) folded.correct = false;
  }
  return out;
}

}  // namespace grmcurate::evalbench
