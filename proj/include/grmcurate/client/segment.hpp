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
#include <string>
#include <string_view>
#include <vector>

#include "grmcurate/client/prompt_template.hpp"

namespace grmcurate::client {

/// One sampled completion as returned by the endpoint. `offsets[i]` is the
/// byte offset of token i within `text`; offsets are non-decreasing.
struct Completion {
  std::string text;
  std::vector<std::string> tokens;
  std::vector<double> logprobs;
  std::vector<std::size_t> offsets;

  bool operator==(const Completion&) const = default;
};

/// Byte offsets for tokens that concatenate exactly to `text`; throws
/// SegmentationError when they do not.
std::vector<std::size_t> offsets_from_tokens(std::string_view text,
                                             const std::vector<std::string>& tokens);

struct Segments {
  std::string reasoning_text;
  std::vector<double> reasoning_probs;
  std::string answer_text;
  std::vector<double> answer_probs;
  std::size_t reasoning_begin = 0;  // token range [begin, end)
  std::size_t reasoning_end = 0;
  std::size_t answer_begin = 0;
  std::size_t answer_end = 0;
};

/// Splits a completion into reasoning and answer spans at token granularity
/// and converts the span logprobs to probabilities.
///
/// ThinkTags: reasoning is the tokens lying wholly between the first
/// "<think>" and the first "</think>" after it; answer is the tokens starting
/// at or after the end of "</think>". Delimiter tokens belong to neither span.
///
/// BoxedAnswer: answer is the tokens overlapping the first match of the
/// template's answer pattern; reasoning is the tokens ending at or before the
/// first answer token.
///
/// Throws SegmentationError on a missing delimiter or match, an empty span, or
/// token metadata inconsistent with the text.
Segments segment(const Completion& completion, const PromptTemplate& tmpl);

/// Inverse of segment() on the span texts: the completion an SFT record
/// trains on, with the think delimiters put back.
std::string restore_completion(std::string_view reasoning_text, std::string_view answer_text,
                               Segmentation segmentation);

}  // namespace grmcurate::client
