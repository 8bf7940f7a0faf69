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

#include <optional>
#include <regex>
#include <string>
#include <string_view>

#include "grmcurate/core/types.hpp"

namespace grmcurate::judge {

inline constexpr std::string_view kDefaultAnswerPattern = R"(\\boxed\{([ABab])\})";

struct Verdict {
  VerdictChoice choice = VerdictChoice::Unparseable;
  std::optional<std::string> raw_match;  // set iff choice != Unparseable

  static Verdict unparseable() { return {}; }
  bool operator==(const Verdict&) const = default;
};

/// Which qualifying match decides when an answer names a choice more than once.
enum class MatchPolicy { First, Last };

/// Compiled answer pattern. The pattern must contain exactly one capture
/// group; construction throws ConfigError otherwise.
class VerdictExtractor {
 public:
  explicit VerdictExtractor(std::string_view pattern = kDefaultAnswerPattern,
                            MatchPolicy policy = MatchPolicy::First);

  /// Never throws on text input. A match counts only if its capture, trimmed
  /// and case-folded, is exactly "a" or "b".
  Verdict extract(std::string_view answer_text) const;

  const std::string& pattern() const noexcept { return pattern_; }
  MatchPolicy policy() const noexcept { return policy_; }

 private:
  std::string pattern_;
  std::regex re_;
  MatchPolicy policy_;
};

Verdict extract_verdict(std::string_view answer_text,
                        std::string_view pattern = kDefaultAnswerPattern,
                        MatchPolicy policy = MatchPolicy::First);

/// The indicator behind rewards, gating and accuracy.
inline bool is_equivalent(const Verdict& v, Label label) noexcept {
  return matches(v.choice, label);
}

}  // namespace grmcurate::judge
