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

#include "grmcurate/judge/verdict.hpp"

#include "grmcurate/core/errors.hpp"

namespace grmcurate::judge {
namespace {

std::optional<VerdictChoice> classify(std::string_view capture) {
  const auto first = capture.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return std::nullopt;
  const auto last = capture.find_last_not_of(" \t\r\n");
  const std::string_view core = capture.substr(first, last - first + 1);
  if (core == "A" || core == "a") return VerdictChoice::A;
  if (core == "B" || core == "b") return VerdictChoice::B;
  return std::nullopt;
}

}  // namespace

VerdictExtractor::VerdictExtractor(std::string_view pattern, MatchPolicy policy)
    : pattern_(pattern), policy_(policy) {
  try {
    re_ = std::regex(pattern_, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ConfigError("answer_pattern does not compile: " + std::string(e.what()));
  }
  if (re_.mark_count() != 1)
    throw ConfigError("answer_pattern must contain exactly one capture group, found " +
                      std::to_string(re_.mark_count()));
}

Verdict VerdictExtractor::extract(std::string_view answer_text) const {
  Verdict found;
  using It = std::string_view::const_iterator;
  try {
    for (std::regex_iterator<It> it(answer_text.begin(), answer_text.end(), re_), end;
         it != end; ++it) {
      const auto& m = *it;
      if (!m[1].matched) continue;
      auto choice = classify(m[1].str());
      if (!choice) continue;
      found = Verdict{*choice, m.str(0)};
      if (policy_ == MatchPolicy::First) break;
    }
  } catch (const std::regex_error&) {
    // Backtracking limits on pathological input: keep whatever matched so far.
  }
  return found;
}

Verdict extract_verdict(std::string_view answer_text, std::string_view pattern,
                        MatchPolicy policy) {
  return VerdictExtractor(pattern, policy).extract(answer_text);
}

}  // namespace grmcurate::judge
