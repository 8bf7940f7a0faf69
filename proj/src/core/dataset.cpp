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

#include "grmcurate/core/dataset.hpp"

#include <limits>

namespace grmcurate {

DatasetReader::DatasetReader(const std::filesystem::path& path, DatasetFormat,
                             ErrorPolicy policy)
    : records_(path, policy) {}

std::optional<PreferenceExample> DatasetReader::next() {
  auto ex = records_.next();
  if (ex && !seen_.insert(ex->id()).second) throw DuplicateIdError(ex->id());
  return ex;
}

std::vector<PreferenceExample> load_dataset(const std::filesystem::path& path,
                                            ErrorPolicy policy) {
  DatasetReader reader(path, DatasetFormat::PreferenceJsonl, policy);
  std::vector<PreferenceExample> out;
  while (auto ex = reader.next()) out.push_back(std::move(*ex));
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

// splitmix64 finalizer: FNV-1a leaves the high bits of short, similar ids
// nearly identical, and the split threshold compares whole 64-bit values.
std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

DatasetSplit split_by_id(std::vector<PreferenceExample> examples, double held_out_fraction,
                         std::uint64_t salt) {
  if (!(held_out_fraction >= 0.0 && held_out_fraction <= 1.0))
    throw ValidationError("held_out_fraction must lie in [0,1]");
  DatasetSplit split;
  const auto bound = static_cast<long double>(held_out_fraction) *
                     static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
  for (auto& ex : examples) {
    const std::uint64_t h = mix(fnv1a64(ex.id()) ^ (salt * 0x9e3779b97f4a7c15ULL));
    if (held_out_fraction > 0.0 && static_cast<long double>(h) <= bound)
      split.held_out.push_back(std::move(ex));
    else
      split.train.push_back(std::move(ex));
  }
  return split;
}

}  // namespace grmcurate
