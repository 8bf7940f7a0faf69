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

#include "grmcurate/client/completion_client.hpp"

#include <cmath>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "grmcurate/core/errors.hpp"

namespace grmcurate::client {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_begin = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  SplitUrl out;
  out.scheme_host_port = url.substr(0, path_begin);
  if (path_begin != std::string::npos) out.path_prefix = url.substr(path_begin);
  while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
  return out;
}

/// Converts code-point offsets into byte offsets within UTF-8 `text`.
std::vector<std::size_t> codepoints_to_bytes(const std::string& text,
                                             const std::vector<std::size_t>& cps) {
  std::vector<std::size_t> boundaries;  // byte offset of each code point, plus end
  boundaries.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) boundaries.push_back(i);
  }
  boundaries.push_back(text.size());
  std::vector<std::size_t> out;
  out.reserve(cps.size());
  for (auto cp : cps) {
    if (cp >= boundaries.size())
      throw TransportError(200, "text_offset points past the end of the completion");
    out.push_back(boundaries[cp]);
  }
  return out;
}

class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<>& sem) : sem_(sem) { sem_.acquire(); }
  ~InFlightSlot() { sem_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

}  // namespace

json build_request(const std::string& model, const std::string& prompt, int n,
                   const SamplingConfig& cfg) {
  json body = {{"model", model},
               {"prompt", prompt},
               {"n", n},
               {"temperature", cfg.temperature},
               {"max_tokens", cfg.max_tokens},
               {"logprobs", 1}};
  if (cfg.seed) body["seed"] = *cfg.seed;
  return body;
}

std::vector<Completion> parse_completions_response(const json& response) {
  auto choices = response.find("choices");
  if (choices == response.end() || !choices->is_array())
    throw TransportError(200, "response has no choices array");
  std::vector<Completion> out;
  out.reserve(choices->size());
  for (const auto& choice : *choices) {
    Completion c;
    if (!choice.contains("text") || !choice["text"].is_string())
      throw TransportError(200, "choice without text");
    c.text = choice["text"].get<std::string>();
    auto lp = choice.find("logprobs");
    if (lp == choice.end() || lp->is_null() || !lp->contains("token_logprobs") ||
        !(*lp)["token_logprobs"].is_array())
      throw ConfigError("logprobs unsupported: endpoint returned no per-token logprobs");
    const json& tokens = (*lp)["tokens"];
    const json& values = (*lp)["token_logprobs"];
    if (!tokens.is_array() || tokens.size() != values.size())
      throw TransportError(200, "tokens and token_logprobs differ in length");
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!tokens[i].is_string() || !values[i].is_number())
        throw TransportError(200, "malformed token or logprob entry");
      const double v = values[i].get<double>();
      if (!std::isfinite(v) || v > 0.0)
        throw TransportError(200, "logprob outside (-inf, 0]");
      c.tokens.push_back(tokens[i].get<std::string>());
      c.logprobs.push_back(v);
    }
    try {
      c.offsets = offsets_from_tokens(c.text, c.tokens);
    } catch (const SegmentationError&) {
      auto offs = lp->find("text_offset");
      if (offs == lp->end() || !offs->is_array() || offs->size() != c.tokens.size())
        throw TransportError(200, "tokens do not spell the text and text_offset is missing");
      std::vector<std::size_t> cps;
      for (const auto& o : *offs) cps.push_back(o.get<std::size_t>());
      const std::size_t base = cps.empty() ? 0 : cps.front();
      for (auto& cp : cps) {
        if (cp < base) throw TransportError(200, "text_offset decreases");
        cp -= base;
      }
      c.offsets = codepoints_to_bytes(c.text, cps);
    }
    out.push_back(std::move(c));
  }
  return out;
}

CompletionClient::CompletionClient(ModelEndpoint endpoint)
    : endpoint_(std::move(endpoint)),
      in_flight_(std::max(endpoint_.max_in_flight, 1)),
      rng_(std::random_device{}()) {
  endpoint_.validate();
  auto split = split_url(endpoint_.base_url);
  scheme_host_port_ = std::move(split.scheme_host_port);
  path_ = split.path_prefix + "/v1/completions";
  backoff_.initial = endpoint_.initial_backoff;
}

json CompletionClient::post_with_retry(const json& body) {
  const std::string payload = body.dump();
  for (int attempt = 0;; ++attempt) {
    int status = 0;
    std::string detail;
    {
      InFlightSlot slot(in_flight_);
      httplib::Client cli(scheme_host_port_);
      const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout);
      cli.set_connection_timeout(timeout);
      cli.set_read_timeout(timeout);
      cli.set_write_timeout(timeout);
      httplib::Headers headers;
      if (endpoint_.api_key) headers.emplace("Authorization", "Bearer " + *endpoint_.api_key);
      ++requests_;
      auto res = cli.Post(path_, headers, payload, "application/json");
      if (res) {
        status = res->status;
        if (status / 100 == 2) {
          try {
            return json::parse(res->body);
          } catch (const json::parse_error& e) {
            throw TransportError(status, std::string("malformed JSON response: ") + e.what());
          }
        }
        detail = "HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200);
      } else {
        detail = httplib::to_string(res.error());
      }
    }
    if (!is_retriable_status(status))
      throw TransportError(status, endpoint_.base_url + ": " + detail);
    if (attempt >= endpoint_.retry_limit)
      throw TransportError(status, endpoint_.base_url + ": giving up after " +
                                       std::to_string(attempt) + " retries: " + detail);
    std::chrono::milliseconds wait;
    {
      std::lock_guard lock(rng_mutex_);
      wait = backoff_.delay(attempt, rng_);
    }
    ++retries_;
    spdlog::warn("{} (attempt {}/{}), retrying in {} ms", detail, attempt + 1,
                 endpoint_.retry_limit + 1, wait.count());
    std::this_thread::sleep_for(wait);
  }
}

std::vector<Completion> CompletionClient::sample_generations(const std::string& prompt,
                                                             const SamplingConfig& cfg) {
  cfg.validate();
  std::vector<Completion> out;
  out.reserve(static_cast<std::size_t>(cfg.num_samples));
  SamplingConfig round = cfg;
  while (out.size() < static_cast<std::size_t>(cfg.num_samples)) {
    const int remaining = cfg.num_samples - static_cast<int>(out.size());
    auto batch = parse_completions_response(
        post_with_retry(build_request(endpoint_.model_name, prompt, remaining, round)));
    if (batch.empty()) throw TransportError(200, "endpoint returned zero choices");
    for (auto& c : batch) {
      if (out.size() == static_cast<std::size_t>(cfg.num_samples)) break;
      out.push_back(std::move(c));
    }
    // A short batch is topped up; a fixed seed would replay the same samples.
    if (round.seed) *round.seed += 1;
  }
  return out;
}

}  // namespace grmcurate::client
