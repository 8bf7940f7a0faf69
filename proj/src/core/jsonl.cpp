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

#include "grmcurate/core/jsonl.hpp"

#include <system_error>
#include <unistd.h>

namespace grmcurate {

JsonlReader::JsonlReader(const std::filesystem::path& path) : path_(path), in_(path) {
  if (!in_) throw IoError("cannot open '" + path.string() + "' for reading");
}

std::optional<std::pair<std::size_t, json>> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      return std::make_pair(line_, json::parse(line));
    } catch (const json::parse_error& e) {
      throw SchemaError(line_, std::string("invalid JSON: ") + e.what());
    }
  }
  if (in_.bad()) throw IoError("read failure on '" + path_.string() + "'");
  return std::nullopt;
}

namespace {

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  return tmp;
}

}  // namespace

AtomicJsonlWriter::AtomicJsonlWriter(std::filesystem::path path)
    : path_(std::move(path)), tmp_(temp_sibling(path_)) {
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open '" + tmp_.string() + "' for writing");
}

AtomicJsonlWriter::~AtomicJsonlWriter() {
  if (!committed_) abandon();
}

void AtomicJsonlWriter::abandon() noexcept {
  out_.close();
  std::error_code ec;
  std::filesystem::remove(tmp_, ec);
}

void AtomicJsonlWriter::write(const json& value) { write_line(canonical_json(value)); }

void AtomicJsonlWriter::write_line(const std::string& line) {
  if (committed_) throw IoError("write after commit on '" + path_.string() + "'");
  out_ << line << '\n';
  if (!out_) {
    abandon();
    throw IoError("write failure on '" + tmp_.string() + "'");
  }
  ++count_;
}

std::size_t AtomicJsonlWriter::commit() {
  out_.flush();
  const bool ok = static_cast<bool>(out_);
  out_.close();
  if (!ok || out_.fail()) {
    abandon();
    throw IoError("write failure on '" + tmp_.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp_, path_, ec);
  if (ec) {
    abandon();
    throw IoError("cannot move output into place at '" + path_.string() + "': " + ec.message());
  }
  committed_ = true;
  return count_;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failure on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

JsonlAppender::JsonlAppender(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw IoError("cannot open '" + path.string() + "' for appending");
}

void JsonlAppender::write(const json& value) {
  out_ << canonical_json(value) << '\n';
  out_.flush();
  if (!out_) throw IoError("append failure on '" + path_.string() + "'");
}

}  // namespace grmcurate
