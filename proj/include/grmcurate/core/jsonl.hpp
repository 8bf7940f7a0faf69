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
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grmcurate/core/codec.hpp"
#include "grmcurate/core/errors.hpp"

namespace grmcurate {

enum class ErrorPolicy { FailFast, SkipAndLog };

struct RecordError {
  std::size_t line;
  std::string message;
};

/// Streams a line-delimited JSON file one parsed line at a time. Blank lines
/// are skipped. Line numbers are 1-based.
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path);

  /// Next (line number, value); nullopt at end of file. Throws SchemaError on
  /// a line that is not valid JSON.
  std::optional<std::pair<std::size_t, json>> next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

/// Streams typed records, applying `policy` to lines that fail to decode.
template <class T>
class RecordReader {
 public:
  explicit RecordReader(const std::filesystem::path& path,
                        ErrorPolicy policy = ErrorPolicy::FailFast)
      : reader_(path), policy_(policy) {}

  std::optional<T> next() {
    for (;;) {
      std::optional<std::pair<std::size_t, json>> item;
      try {
        item = reader_.next();
      } catch (const SchemaError& e) {
        if (policy_ == ErrorPolicy::FailFast) throw;
        skipped_.push_back({e.line(), e.what()});
        continue;
      }
      if (!item) return std::nullopt;
      try {
        return Codec<T>::decode(item->second);
      } catch (const ValidationError& e) {
        if (policy_ == ErrorPolicy::FailFast) throw SchemaError(item->first, e.what());
        skipped_.push_back({item->first, e.what()});
      } catch (const json::exception& e) {
        if (policy_ == ErrorPolicy::FailFast) throw SchemaError(item->first, e.what());
        skipped_.push_back({item->first, e.what()});
      }
    }
  }

  const std::vector<RecordError>& skipped() const noexcept { return skipped_; }

 private:
  JsonlReader reader_;
  ErrorPolicy policy_;
  std::vector<RecordError> skipped_;
};

template <class T>
std::vector<T> read_records(const std::filesystem::path& path,
                            ErrorPolicy policy = ErrorPolicy::FailFast) {
  RecordReader<T> reader(path, policy);
  std::vector<T> out;
  while (auto rec = reader.next()) out.push_back(std::move(*rec));
  return out;
}

/// Writes canonical JSON lines to a temporary sibling of `path` and renames it
/// over `path` on commit(). If the writer is destroyed without a successful
/// commit the temporary file is removed and `path` is left untouched.
class AtomicJsonlWriter {
 public:
  explicit AtomicJsonlWriter(std::filesystem::path path);
  ~AtomicJsonlWriter();

  AtomicJsonlWriter(const AtomicJsonlWriter&) = delete;
  AtomicJsonlWriter& operator=(const AtomicJsonlWriter&) = delete;

  void write(const json& value);
  void write_line(const std::string& line);
  /// Returns the number of records written.
  std::size_t commit();

  std::size_t count() const noexcept { return count_; }
  const std::filesystem::path& temp_path() const noexcept { return tmp_; }

 private:
  void abandon() noexcept;

  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  std::size_t count_ = 0;
  bool committed_ = false;
};

/// Writes every element of `records` as one canonical-JSON line, atomically.
template <class T, class Range>
std::size_t write_records(const std::filesystem::path& path, const Range& records) {
  AtomicJsonlWriter writer(path);
  for (const auto& rec : records) writer.write(Codec<T>::encode(rec));
  return writer.commit();
}

/// Writes whole text to `path` atomically (same temp-and-rename discipline).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

/// Append-only progress log: each write lands as one full line and is flushed
/// before returning, so a crash loses at most the line being written.
class JsonlAppender {
 public:
  explicit JsonlAppender(const std::filesystem::path& path);
  void write(const json& value);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace grmcurate
