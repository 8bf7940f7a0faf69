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

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

namespace grmcurate::mock {

using nlohmann::json;

/// Deterministic stand-in tokenizer: "<think>", "</think>", alphanumeric
/// runs, whitespace runs, and any other single byte each form one token.
/// Tokens always concatenate back to the input.
std::vector<std::string> tokenize(std::string_view text);

/// One `choices[]` entry carrying tokens, logprobs and code-point offsets.
json make_choice(const std::string& text, const std::vector<std::string>& tokens,
                 const std::vector<double>& logprobs);

/// Choice for `text` tokenized by tokenize() with one logprob for all tokens.
json make_choice(const std::string& text, double logprob = 0.0);

json make_response(std::vector<json> choices);

struct Reply {
  int status = 200;
  json body;
  std::chrono::milliseconds delay{0};
};

/// Called once per POST /v1/completions with the decoded request body and a
/// 0-based call counter.
using Handler = std::function<Reply(const json& request, std::size_t call_index)>;

/// In-process OpenAI-style completions server on 127.0.0.1 and an ephemeral
/// port. Records every request and the peak number of concurrent requests.
class MockServer {
 public:
  explicit MockServer(Handler handler);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  int port() const noexcept { return port_; }
  std::string base_url() const;
  std::size_t calls() const noexcept { return calls_.load(); }
  std::size_t high_water() const noexcept { return high_water_.load(); }
  std::vector<json> requests() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Handler handler_;
  int port_ = 0;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> high_water_{0};
  mutable std::mutex mu_;
  std::vector<json> requests_;
  std::thread thread_;
};

/// Judge that always names the response it was scripted to prefer. `pairs`
/// holds (preferred text, other text); whichever appears first in the prompt
/// is slot A. With `invert` it always names the other one.
Handler oracle_judge(std::vector<std::pair<std::string, std::string>> pairs, bool invert = false);

/// Serves a script file: {"models": {model: {key: [choice...]}},
/// "oracle": {model: [{"chosen": .., "rejected": ..}]}}. A request is matched
/// to the longest key contained in its prompt; n choices are returned in
/// script order, cycling if the script holds fewer.
Handler scripted(const json& script);
Handler scripted_from_file(const std::filesystem::path& path);

/// Fails the first `failures` calls with `status`, then defers to `next`.
Handler failing_first(std::size_t failures, int status, Handler next);

}  // namespace grmcurate::mock
