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

#include "grmcurate/core/codec.hpp"

#include <cmath>

#include "grmcurate/core/errors.hpp"

namespace grmcurate {
namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(std::string("missing field \"") + name + "\"");
  return *it;
}

std::string string_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) throw ValidationError(std::string("field \"") + name + "\" must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ValidationError(std::string("field \"") + name + "\" must be a string");
  return it->get<std::string>();
}

double number_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number()) throw ValidationError(std::string("field \"") + name + "\" must be a number");
  return v.get<double>();
}

std::size_t index_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ValidationError(std::string("field \"") + name + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> probs_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) throw ValidationError(std::string("field \"") + name + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& p : v) {
    if (!p.is_number()) throw ValidationError(std::string("field \"") + name + "\" holds a non-number");
    out.push_back(p.get<double>());
  }
  return out;
}

}  // namespace

json Codec<PreferenceExample>::encode(const PreferenceExample& ex) {
  json j = {{"id", ex.id()},
            {"prompt", ex.prompt()},
            {"response_a", ex.response_a()},
            {"response_b", ex.response_b()},
            {"label", to_string(ex.label())}};
  if (ex.category()) j["category"] = *ex.category();
  if (ex.source()) j["source"] = *ex.source();
  return j;
}

PreferenceExample Codec<PreferenceExample>::decode(const json& j) {
  // "::" is reserved for the pair ids best-of-n expansion generates.
  const std::string id = string_field(j, "id");
  if (id.find("::") != std::string::npos)
    throw ValidationError("example id '" + id + "' contains reserved \"::\"");
  return PreferenceExample(id, string_field(j, "prompt"),
                           string_field(j, "response_a"), string_field(j, "response_b"),
                           parse_label(string_field(j, "label")),
                           optional_string(j, "category"), optional_string(j, "source"));
}

json Codec<GenerationRecord>::encode(const GenerationRecord& rec) {
  return {{"example_id", rec.example_id()},
          {"sample_index", rec.sample_index()},
          {"full_text", rec.full_text()},
          {"reasoning_text", rec.reasoning_text()},
          {"answer_text", rec.answer_text()},
          {"reasoning_probs", rec.fields().reasoning_probs},
          {"answer_probs", rec.fields().answer_probs},
          {"verdict", to_string(rec.verdict())},
          {"correct", rec.correct()}};
}

GenerationRecord Codec<GenerationRecord>::decode(const json& j) {
  const json& correct = field(j, "correct");
  if (!correct.is_boolean()) throw ValidationError("field \"correct\" must be a boolean");
  return GenerationRecord(GenerationRecord::Fields{
      .example_id = string_field(j, "example_id"),
      .sample_index = index_field(j, "sample_index"),
      .full_text = string_field(j, "full_text"),
      .reasoning_text = string_field(j, "reasoning_text"),
      .answer_text = string_field(j, "answer_text"),
      .reasoning_probs = probs_field(j, "reasoning_probs"),
      .answer_probs = probs_field(j, "answer_probs"),
      .verdict = parse_verdict_choice(string_field(j, "verdict")),
      .correct = correct.get<bool>(),
  });
}

json Codec<GenerationGroup>::encode(const GenerationGroup& group) {
  json samples = json::array();
  for (const auto& s : group.samples()) samples.push_back(Codec<GenerationRecord>::encode(s));
  return {{"example_id", group.example_id()},
          {"samples", std::move(samples)},
          {"correct_count", group.correct_count()}};
}

GenerationGroup Codec<GenerationGroup>::decode(const json& j) {
  const json& raw = field(j, "samples");
  if (!raw.is_array()) throw ValidationError("field \"samples\" must be an array");
  std::vector<GenerationRecord> samples;
  samples.reserve(raw.size());
  for (const auto& s : raw) samples.push_back(Codec<GenerationRecord>::decode(s));
  GenerationGroup group(string_field(j, "example_id"), std::move(samples));
  if (index_field(j, "correct_count") != group.correct_count())
    throw ValidationError("group '" + group.example_id() +
                          "': correct_count disagrees with its samples");
  return group;
}

json Codec<RStarScore>::encode(const RStarScore& score) {
  return {{"self_consistency", score.self_consistency()},
          {"validity", score.validity()},
          {"r_star", score.r_star()}};
}

RStarScore Codec<RStarScore>::decode(const json& j) {
  RStarScore score(number_field(j, "self_consistency"), number_field(j, "validity"));
  const double stored = number_field(j, "r_star");
  const double scale = std::max(std::abs(score.r_star()), std::abs(stored));
  if (std::abs(stored - score.r_star()) > 1e-12 * scale)
    throw ValidationError("r_star is not self_consistency * validity");
  return score;
}

std::string canonical_json(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

}  // namespace grmcurate
