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

#include "grmcurate/client/prompt_template.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "grmcurate/core/dataset.hpp"
#include "grmcurate/core/errors.hpp"
#include "grmcurate/judge/verdict.hpp"

namespace grmcurate::client {
namespace {

constexpr std::array<std::string_view, 3> kPlaceholders = {"{prompt}", "{response_a}",
                                                           "{response_b}"};

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

constexpr std::string_view kDefaultTemplate =
    R"(You are an impartial judge comparing two assistant responses to the same user prompt.
Read the prompt and both responses carefully. Reason step by step about which response is more helpful, correct, honest and harmless, then decide which one is better. Do not let the order of the responses, their length, or the assistants' names influence your decision.

[User Prompt]
{prompt}

[Response A]
{response_a}

[Response B]
{response_b}

Think through your evaluation inside <think> and </think> tags. After </think>, output your final verdict as \boxed{A} if Response A is better or \boxed{B} if Response B is better.)";

}  // namespace

std::string_view to_string(Segmentation s) noexcept {
  return s == Segmentation::ThinkTags ? "think_tags" : "boxed_answer";
}

Segmentation parse_segmentation(std::string_view text) {
  if (text == "think_tags") return Segmentation::ThinkTags;
  if (text == "boxed_answer") return Segmentation::BoxedAnswer;
  throw ConfigError("segmentation must be think_tags or boxed_answer, got '" +
                    std::string(text) + "'");
}

PromptTemplate::PromptTemplate(std::string template_text, Segmentation segmentation,
                               std::string answer_pattern)
    : text_(std::move(template_text)),
      segmentation_(segmentation),
      answer_pattern_(std::move(answer_pattern)) {
  for (auto ph : kPlaceholders) {
    const auto n = count_occurrences(text_, ph);
    if (n != 1)
      throw ConfigError("template must contain " + std::string(ph) + " exactly once (found " +
                        std::to_string(n) + ")");
  }
  // Compiles the pattern and checks the single capture group.
  judge::VerdictExtractor check(answer_pattern_);
}

std::string PromptTemplate::fingerprint() const {
  std::string material = text_;
  material += '\0';
  material += answer_pattern_;
  material += '\0';
  material += to_string(segmentation_);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(material)));
  return buf;
}

PromptTemplate default_template() {
  return PromptTemplate(std::string(kDefaultTemplate), Segmentation::ThinkTags,
                        std::string(judge::kDefaultAnswerPattern));
}

PromptTemplate load_template(const std::filesystem::path& path, Segmentation segmentation,
                             std::string answer_pattern) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read template file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return PromptTemplate(ss.str(), segmentation, std::move(answer_pattern));
}

std::string render_prompt(const PromptTemplate& tmpl, const PreferenceExample& ex) {
  const std::string_view text = tmpl.template_text();
  const std::array<std::string_view, 3> values = {ex.prompt(), ex.response_a(),
                                                  ex.response_b()};
  std::string out;
  out.reserve(text.size() + values[0].size() + values[1].size() + values[2].size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool substituted = false;
    if (text[pos] == '{') {
      for (std::size_t k = 0; k < kPlaceholders.size(); ++k) {
        if (text.compare(pos, kPlaceholders[k].size(), kPlaceholders[k]) == 0) {
          out += values[k];
          pos += kPlaceholders[k].size();
          substituted = true;
          break;
        }
      }
    }
    if (!substituted) out += text[pos++];
  }
  return out;
}

void SamplingConfig::validate() const {
  if (num_samples < 1) throw ConfigError("num_samples must be >= 1");
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw ConfigError("temperature must be a non-negative number");
  if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
}

}  // namespace grmcurate::client
