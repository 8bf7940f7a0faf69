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
#include <string>
#include <string_view>

#include "grmcurate/core/types.hpp"

namespace grmcurate::client {

/// How a completion is split into reasoning and answer spans.
enum class Segmentation {
  ThinkTags,    // reasoning inside the first <think>...</think>, answer after it
  BoxedAnswer,  // answer is the first answer_pattern match, reasoning before it
};

std::string_view to_string(Segmentation s) noexcept;
Segmentation parse_segmentation(std::string_view text);  // throws ConfigError

inline constexpr std::string_view kThinkOpen = "<think>";
inline constexpr std::string_view kThinkClose = "</think>";

/// Judge prompt with {prompt}, {response_a} and {response_b} placeholders,
/// each occurring exactly once.
class PromptTemplate {
 public:
  PromptTemplate(std::string template_text, Segmentation segmentation,
                 std::string answer_pattern);

  const std::string& template_text() const noexcept { return text_; }
  Segmentation segmentation() const noexcept { return segmentation_; }
  const std::string& answer_pattern() const noexcept { return answer_pattern_; }

  /// Hex FNV-1a of the template text, pattern and segmentation mode.
  std::string fingerprint() const;

  bool operator==(const PromptTemplate&) const = default;

 private:
  std::string text_;
  Segmentation segmentation_;
  std::string answer_pattern_;
};

/// The shipped pairwise judge template: think-tag reasoning, boxed verdict.
PromptTemplate default_template();

PromptTemplate load_template(const std::filesystem::path& path, Segmentation segmentation,
                             std::string answer_pattern);

/// Single-pass substitution: text inserted for one placeholder is never
/// rescanned, so responses may themselves contain "{prompt}".
std::string render_prompt(const PromptTemplate& tmpl, const PreferenceExample& ex);

/// Per-stage sampling settings.
struct SamplingConfig {
  int num_samples = 8;
  double temperature = 1.0;
  int max_tokens = 8192;
  std::optional<std::int64_t> seed;

  void validate() const;  // throws ConfigError
  bool operator==(const SamplingConfig&) const = default;
};

}  // namespace grmcurate::client
