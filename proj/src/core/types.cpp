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

#include "grmcurate/core/types.hpp"

#include <cmath>
#include <utility>

#include "grmcurate/core/errors.hpp"
#include "grmcurate/kernels/kernels.hpp"

namespace grmcurate {

std::string_view to_string(Label label) noexcept {
  return label == Label::A ? "A" : "B";
}

std::string_view to_string(VerdictChoice choice) noexcept {
  switch (choice) {
    case VerdictChoice::A:
      return "A";
    case VerdictChoice::B:
      return "B";
    case VerdictChoice::Unparseable:
      break;
  }
  return "Unparseable";
}

Label parse_label(std::string_view text) {
  if (text == "A") return Label::A;
  if (text == "B") return Label::B;
  throw ValidationError("label must be \"A\" or \"B\", got \"" + std::string(text) + "\"");
}

VerdictChoice parse_verdict_choice(std::string_view text) {
  if (text == "A") return VerdictChoice::A;
  if (text == "B") return VerdictChoice::B;
  if (text == "Unparseable") return VerdictChoice::Unparseable;
  throw ValidationError("unknown verdict \"" + std::string(text) + "\"");
}

Label flipped(Label label) noexcept { return label == Label::A ? Label::B : Label::A; }

VerdictChoice flipped(VerdictChoice choice) noexcept {
  switch (choice) {
    case VerdictChoice::A:
      return VerdictChoice::B;
    case VerdictChoice::B:
      return VerdictChoice::A;
    case VerdictChoice::Unparseable:
      break;
  }
  return VerdictChoice::Unparseable;
}

bool matches(VerdictChoice choice, Label label) noexcept {
  return (choice == VerdictChoice::A && label == Label::A) ||
         (choice == VerdictChoice::B && label == Label::B);
}

PreferenceExample::PreferenceExample(std::string id, std::string prompt,
                                     std::string response_a, std::string response_b,
                                     Label label, std::optional<std::string> category,
                                     std::optional<std::string> source)
    : id_(std::move(id)),
      prompt_(std::move(prompt)),
      response_a_(std::move(response_a)),
      response_b_(std::move(response_b)),
      label_(label),
      category_(std::move(category)),
      source_(std::move(source)) {
  if (id_.empty()) throw ValidationError("example id must be non-empty");
  if (prompt_.empty()) throw ValidationError("example '" + id_ + "': empty prompt");
  if (response_a_.empty() || response_b_.empty())
    throw ValidationError("example '" + id_ + "': empty response");
}

PreferenceExample PreferenceExample::swapped() const {
  return PreferenceExample(id_, prompt_, response_b_, response_a_, flipped(label_),
                           category_, source_);
}

namespace {

void check_probs(std::span<const double> probs, const char* span_name,
                 const std::string& id) {
  if (!kernels::all_in_unit_interval(probs))
    throw ValidationError("record '" + id + "': " + span_name +
                          " probability outside [0,1]");
}

}  // namespace

GenerationRecord::GenerationRecord(Fields fields) : f_(std::move(fields)) {
  if (f_.example_id.empty()) throw ValidationError("record example_id must be non-empty");
  check_probs(f_.reasoning_probs, "reasoning", f_.example_id);
  check_probs(f_.answer_probs, "answer", f_.example_id);
  if (f_.verdict == VerdictChoice::Unparseable) {
    if (f_.correct)
      throw ValidationError("record '" + f_.example_id +
                            "': unparseable verdict cannot be correct");
    return;
  }
  // A parsed verdict implies a segmented completion.
  if (f_.reasoning_probs.empty() || f_.answer_probs.empty())
    throw ValidationError("record '" + f_.example_id + "': empty span with a parsed verdict");
}

GenerationRecord GenerationRecord::with_sample_index(std::size_t index) const {
  Fields copy = f_;
  copy.sample_index = index;
  return GenerationRecord(std::move(copy));
}

GenerationGroup::GenerationGroup(std::string example_id,
                                 std::vector<GenerationRecord> samples)
    : example_id_(std::move(example_id)), samples_(std::move(samples)) {
  if (samples_.empty())
    throw ValidationError("group '" + example_id_ + "' has no samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.example_id() != example_id_)
      throw ValidationError("group '" + example_id_ + "' holds a sample of '" +
                            s.example_id() + "'");
    if (s.sample_index() != i)
      throw ValidationError("group '" + example_id_ + "': sample_index " +
                            std::to_string(s.sample_index()) + " at position " +
                            std::to_string(i));
    if (s.correct()) ++correct_count_;
  }
}

RStarScore::RStarScore(double self_consistency, double validity)
    : self_consistency_(self_consistency),
      validity_(validity),
      r_star_(self_consistency * validity) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(self_consistency_) || !in_unit(validity_))
    throw ValidationError("R* factors must lie in [0,1]");
}

void ModelEndpoint::validate() const {
  if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0)
    throw ConfigError("endpoint base_url must start with http:// or https://, got '" +
                      base_url + "'");
  if (model_name.empty()) throw ConfigError("endpoint model_name must be set");
  if (max_in_flight < 1) throw ConfigError("endpoint max_in_flight must be >= 1");
  if (retry_limit < 0 || retry_limit > kMaxRetryLimit)
    throw ConfigError("endpoint retry_limit must lie in [0, 10]");
  if (timeout.count() <= 0) throw ConfigError("endpoint timeout must be positive");
  if (initial_backoff.count() < 0) throw ConfigError("endpoint backoff must be >= 0");
}

}  // namespace grmcurate
