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

#include "grmcurate/client/segment.hpp"

#include <cmath>
#include <regex>

#include "grmcurate/core/errors.hpp"

namespace grmcurate::client {
namespace {

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool empty() const { return begin >= end; }
};

void check_metadata(const Completion& c) {
  const std::size_t n = c.tokens.size();
  if (c.logprobs.size() != n || c.offsets.size() != n)
    throw SegmentationError("token, logprob and offset counts differ");
  for (std::size_t i = 0; i < n; ++i) {
    if (c.offsets[i] > c.text.size()) throw SegmentationError("token offset past end of text");
    if (i > 0 && c.offsets[i] < c.offsets[i - 1])
      throw SegmentationError("token offsets decrease");
  }
}

std::size_t token_end(const Completion& c, std::size_t i) {
  return i + 1 < c.offsets.size() ? c.offsets[i + 1] : c.text.size();
}

/// Tokens wholly inside the byte range [lo, hi).
TokenRange tokens_within(const Completion& c, std::size_t lo, std::size_t hi) {
  TokenRange r{c.tokens.size(), c.tokens.size()};
  for (std::size_t i = 0; i < c.tokens.size(); ++i) {
    if (c.offsets[i] >= lo && token_end(c, i) <= hi) {
      if (r.begin == c.tokens.size()) r.begin = i;
      r.end = i + 1;
    } else if (r.begin != c.tokens.size()) {
      break;
    }
  }
  return r;
}

void fill(const Completion& c, TokenRange r, std::string& text, std::vector<double>& probs) {
  const std::size_t lo = c.offsets[r.begin];
  const std::size_t hi = token_end(c, r.end - 1);
  text.assign(c.text, lo, hi - lo);
  probs.clear();
  probs.reserve(r.end - r.begin);
  for (std::size_t i = r.begin; i < r.end; ++i) probs.push_back(std::exp(c.logprobs[i]));
}

}  // namespace

std::vector<std::size_t> offsets_from_tokens(std::string_view text,
                                             const std::vector<std::string>& tokens) {
  std::vector<std::size_t> offsets;
  offsets.reserve(tokens.size());
  std::size_t pos = 0;
  for (const auto& t : tokens) {
    if (text.compare(pos, t.size(), t) != 0)
      throw SegmentationError("tokens do not reproduce the completion text");
    offsets.push_back(pos);
    pos += t.size();
  }
  if (pos != text.size()) throw SegmentationError("tokens do not cover the completion text");
  return offsets;
}

Segments segment(const Completion& c, const PromptTemplate& tmpl) {
  check_metadata(c);
  TokenRange reasoning;
  TokenRange answer;

  if (tmpl.segmentation() == Segmentation::ThinkTags) {
    const auto open = c.text.find(kThinkOpen);
    if (open == std::string::npos) throw SegmentationError("no <think> delimiter");
    const std::size_t inner = open + kThinkOpen.size();
    const auto close = c.text.find(kThinkClose, inner);
    if (close == std::string::npos) throw SegmentationError("no </think> delimiter");
    reasoning = tokens_within(c, inner, close);
    answer = tokens_within(c, close + kThinkClose.size(), c.text.size());
  } else {
    const std::regex re(tmpl.answer_pattern(), std::regex::ECMAScript);
    std::smatch m;
    if (!std::regex_search(c.text, m, re) || m.length(0) == 0)
      throw SegmentationError("answer pattern not found");
    const auto ms = static_cast<std::size_t>(m.position(0));
    const auto me = ms + static_cast<std::size_t>(m.length(0));
    answer = {c.tokens.size(), c.tokens.size()};
    for (std::size_t i = 0; i < c.tokens.size(); ++i) {
      if (c.offsets[i] < me && token_end(c, i) > ms) {
        if (answer.begin == c.tokens.size()) answer.begin = i;
        answer.end = i + 1;
      }
    }
    if (answer.empty()) throw SegmentationError("answer match covers no token");
    reasoning = {0, answer.begin};
  }

  if (reasoning.empty()) throw SegmentationError("empty reasoning span");
  if (answer.empty()) throw SegmentationError("empty answer span");

  Segments s;
  fill(c, reasoning, s.reasoning_text, s.reasoning_probs);
  fill(c, answer, s.answer_text, s.answer_probs);
  s.reasoning_begin = reasoning.begin;
  s.reasoning_end = reasoning.end;
  s.answer_begin = answer.begin;
  s.answer_end = answer.end;
  return s;
}

std::string restore_completion(std::string_view reasoning_text, std::string_view answer_text,
                               Segmentation segmentation) {
  std::string out;
  if (segmentation == Segmentation::ThinkTags) {
    out.reserve(kThinkOpen.size() + reasoning_text.size() + kThinkClose.size() +
                answer_text.size());
    out += kThinkOpen;
    out += reasoning_text;
    out += kThinkClose;
  } else {
    out += reasoning_text;
  }
  out += answer_text;
  return out;
}

}  // namespace grmcurate::client
