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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "grmcurate/core/jsonl.hpp"
#include "grmcurate/core/types.hpp"

namespace grmcurate {

enum class DatasetFormat { PreferenceJsonl };

/// Streams PreferenceExamples from a preference JSONL file in file order.
/// Malformed lines follow `policy`; a repeated id always throws
/// DuplicateIdError. Only the set of seen ids is kept in memory.
class DatasetReader {
 public:
  explicit DatasetReader(const std::filesystem::path& path,
                         DatasetFormat format = DatasetFormat::PreferenceJsonl,
                         ErrorPolicy policy = ErrorPolicy::FailFast);

  std::optional<PreferenceExample> next();
  const std::vector<RecordError>& skipped() const noexcept { return records_.skipped(); }

 private:
  RecordReader<PreferenceExample> records_;
  std::unordered_set<std::string> seen_;
};

std::vector<PreferenceExample> load_dataset(const std::filesystem::path& path,
                                            ErrorPolicy policy = ErrorPolicy::FailFast);

/// 64-bit FNV-1a. Stable across platforms; used for template fingerprints and
/// id-keyed splits.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

struct DatasetSplit {
  std::vector<PreferenceExample> train;
  std::vector<PreferenceExample> held_out;
};

/// Deterministic split keyed on each example's id, so an example lands on the
/// same side regardless of file order. `held_out_fraction` in [0,1].
DatasetSplit split_by_id(std::vector<PreferenceExample> examples, double held_out_fraction,
                         std::uint64_t salt = 0);

}  // namespace grmcurate
