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

#include <json.hpp>

#include "grmcurate/core/types.hpp"

namespace grmcurate {

using json = nlohmann::json;

/// JSON mapping for a persisted type. `decode` runs the type's validating
/// constructor, so anything it returns satisfies the invariants.
template <class T>
struct Codec;

template <>
struct Codec<json> {
  static json encode(const json& j) { return j; }
  static json decode(const json& j) { return j; }
};

template <>
struct Codec<PreferenceExample> {
  static json encode(const PreferenceExample& ex);
  static PreferenceExample decode(const json& j);
};

template <>
struct Codec<GenerationRecord> {
  static json encode(const GenerationRecord& rec);
  static GenerationRecord decode(const json& j);
};

template <>
struct Codec<GenerationGroup> {
  static json encode(const GenerationGroup& group);
  static GenerationGroup decode(const json& j);
};

template <>
struct Codec<RStarScore> {
  static json encode(const RStarScore& score);
  static RStarScore decode(const json& j);
};

/// One line of canonical JSON: sorted keys, no whitespace, shortest
/// round-trip doubles, UTF-8 passed through unescaped.
std::string canonical_json(const json& j);

}  // namespace grmcurate
