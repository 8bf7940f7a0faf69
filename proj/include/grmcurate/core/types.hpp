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

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace grmcurate {

/// Ground-truth preference: which of the two candidate responses is better.
enum class Label { A, B };

/// A judge's extracted choice. Unparseable covers both "no verdict found" and
/// "completion could not be segmented".
enum class VerdictChoice { A, B, Unparseable };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(VerdictChoice choice) noexcept;
Label parse_label(std::string_view text);             // throws ValidationError
VerdictChoice parse_verdict_choice(std::string_view text);  // throws ValidationError
Label flipped(Label label) noexcept;
VerdictChoice flipped(VerdictChoice choice) noexcept;
bool matches(VerdictChoice choice, Label label) noexcept;

/// One benchmark or training item: a prompt, two candidate responses and the
/// ground-truth preference between them.
class PreferenceExample {
 public:
  PreferenceExample(std::string id, std::string prompt, std::string response_a,
                    std::string response_b, Label label,
                    std::optional<std::string> category = std::nullopt,
                    std::optional<std::string> source = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  const std::string& prompt() const noexcept { return prompt_; }
  const std::string& response_a() const noexcept { return response_a_; }
  const std::string& response_b() const noexcept { return response_b_; }
  Label label() const noexcept { return label_; }
  const std::optional<std::string>& category() const noexcept { return category_; }
  const std::optional<std::string>& source() const noexcept { return source_; }

  /// Same item with the candidates exchanged and the label flipped.
  PreferenceExample swapped() const;

  bool operator==(const PreferenceExample&) const = default;

 private:
  std::string id_;
  std::string prompt_;
  std::string response_a_;
  std::string response_b_;
  Label label_;
  std::optional<std::string> category_;
  std::optional<std::string> source_;
};

/// One sampled judge output, split into reasoning and answer spans with the
/// linear-space probability of every token in each span.
class GenerationRecord {
 public:
  struct Fields {
    std::string example_id;
    std::size_t sample_index = 0;
    std::string full_text;
    std::string reasoning_text;
    std::string answer_text;
    std::vector<double> reasoning_probs;
    std::vector<double> answer_probs;
    VerdictChoice verdict = VerdictChoice::Unparseable;
    bool correct = false;

    bool operator==(const Fields&) const = default;
  };

  /// Validates: probabilities in [0,1]; both spans non-empty unless the
  /// verdict is Unparseable; Unparseable implies incorrect.
  explicit GenerationRecord(Fields fields);

  const std::string& example_id() const noexcept { return f_.example_id; }
  std::size_t sample_index() const noexcept { return f_.sample_index; }
  const std::string& full_text() const noexcept { return f_.full_text; }
  const std::string& reasoning_text() const noexcept { return f_.reasoning_text; }
  const std::string& answer_text() const noexcept { return f_.answer_text; }
  std::span<const double> reasoning_probs() const noexcept { return f_.reasoning_probs; }
  std::span<const double> answer_probs() const noexcept { return f_.answer_probs; }
  VerdictChoice verdict() const noexcept { return f_.verdict; }
  bool correct() const noexcept { return f_.correct; }
  const Fields& fields() const noexcept { return f_; }

  GenerationRecord with_sample_index(std::size_t index) const;

  bool operator==(const GenerationRecord&) const = default;

 private:
  Fields f_;
};

/// The K samples drawn for one example.
class GenerationGroup {
 public:
  /// Samples must share `example_id` and carry sample_index 0..K-1 in order.
  GenerationGroup(std::string example_id, std::vector<GenerationRecord> samples);

  const std::string& example_id() const noexcept { return example_id_; }
  const std::vector<GenerationRecord>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t correct_count() const noexcept { return correct_count_; }

  bool operator==(const GenerationGroup&) const = default;

 private:
  std::string example_id_;
  std::vector<GenerationRecord> samples_;
  std::size_t correct_count_ = 0;
};

class RStarScore {
 public:
  RStarScore(double self_consistency, double validity);

  double self_consistency() const noexcept { return self_consistency_; }
  double validity() const noexcept { return validity_; }
  double r_star() const noexcept { return r_star_; }

  bool operator==(const RStarScore&) const = default;

 private:
  double self_consistency_;
  double validity_;
  double r_star_;
};

/// Connection details for one OpenAI-compatible completions service.
struct ModelEndpoint {
  static constexpr int kMaxRetryLimit = 10;

  std::string base_url;
  std::string model_name;
  int max_in_flight = 4;
  std::chrono::milliseconds timeout{600'000};
  int retry_limit = 3;
  std::chrono::milliseconds initial_backoff{1000};
  std::optional<std::string> api_key;

  void validate() const;  // throws ConfigError
  bool operator==(const ModelEndpoint&) const = default;
};

}  // namespace grmcurate
