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
#include <mutex>
#include <random>
#include <semaphore>
#include <string>
#include <vector>

#include <json.hpp>

#include "grmcurate/client/backoff.hpp"
#include "grmcurate/client/prompt_template.hpp"
#include "grmcurate/client/segment.hpp"
#include "grmcurate/core/types.hpp"

namespace grmcurate::client {

/// Client for one OpenAI-compatible `/v1/completions` endpoint. Safe to share
/// between threads; at most `max_in_flight` HTTP requests are outstanding at
/// any moment.
class CompletionClient {
 public:
  explicit CompletionClient(ModelEndpoint endpoint);

  /// Exactly cfg.num_samples completions in arrival order, each with one
  /// logprob per token. Throws ConfigError when the endpoint returns no
  /// logprobs and TransportError once retries are exhausted.
  std::vector<Completion> sample_generations(const std::string& prompt,
                                             const SamplingConfig& cfg);

  const ModelEndpoint& endpoint() const noexcept { return endpoint_; }
  std::size_t requests_sent() const noexcept { return requests_.load(); }
  std::size_t retries() const noexcept { return retries_.load(); }

 private:
  nlohmann::json post_with_retry(const nlohmann::json& body);

  ModelEndpoint endpoint_;
  std::string scheme_host_port_;
  std::string path_;
  BackoffPolicy backoff_;
  std::counting_semaphore<> in_flight_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> retries_{0};
};

/// Request body for one completions call.
nlohmann::json build_request(const std::string& model, const std::string& prompt, int n,
                             const SamplingConfig& cfg);

/// Decodes the `choices` of a completions response. Offsets come from the
/// tokens when they concatenate to the text, else from `text_offset`
/// (code-point offsets, possibly counted from the start of the prompt).
std::vector<Completion> parse_completions_response(const nlohmann::json& response);

}  // namespace grmcurate::client
