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
#include <stdexcept>
#include <string>

namespace grmcurate {

/// Root of every error thrown by this library. Each subclass maps onto one
/// failure class a caller may want to handle separately (the CLI maps them
/// onto exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A JSONL line could not be decoded into the expected record type.
class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& id);
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The endpoint could not produce a usable response. `status` is the last
/// HTTP status seen, or 0 when no HTTP exchange completed.
class TransportError : public Error {
 public:
  TransportError(int status, const std::string& what);
  int status() const noexcept { return status_; }
  bool unreachable() const noexcept { return status_ == 0; }

 private:
  int status_;
};

class SegmentationError : public Error {
 public:
  using Error::Error;
};

class DegenerateSpanError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class JoinError : public Error {
 public:
  using Error::Error;
};

class EmptyRunError : public Error {
 public:
  using Error::Error;
};

}  // namespace grmcurate
