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

#include "grmcurate_mock/mock_endpoint.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <httplib.h>

namespace grmcurate::mock {

std::vector<std::string> tokenize(std::string_view text) {
  static constexpr std::string_view kOpen = "<think>";
  static constexpr std::string_view kClose = "</think>";
  auto is_alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i + 1;
    if (text.compare(i, kOpen.size(), kOpen) == 0) {
      j = i + kOpen.size();
    } else if (text.compare(i, kClose.size(), kClose) == 0) {
      j = i + kClose.size();
    } else if (is_alnum(text[i])) {
      while (j < text.size() && is_alnum(text[j])) ++j;
    } else if (is_space(text[i])) {
      while (j < text.size() && is_space(text[j])) ++j;
    }
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

json make_choice(const std::string& text, const std::vector<std::string>& tokens,
                 const std::vector<double>& logprobs) {
  if (tokens.size() != logprobs.size()) throw std::invalid_argument("tokens/logprobs mismatch");
  std::vector<std::size_t> offsets;
  std::size_t cp = 0;
  for (const auto& t : tokens) {
    offsets.push_back(cp);
    for (unsigned char c : t)
      if ((c & 0xC0) != 0x80) ++cp;
  }
  return {{"text", text},
          {"index", 0},
          {"finish_reason", "stop"},
          {"logprobs",
           {{"tokens", tokens}, {"token_logprobs", logprobs}, {"text_offset", offsets}}}};
}

json make_choice(const std::string& text, double logprob) {
  auto tokens = tokenize(text);
  return make_choice(text, tokens, std::vector<double>(tokens.size(), logprob));
}

json make_response(std::vector<json> choices) {
  for (std::size_t i = 0; i < choices.size(); ++i) choices[i]["index"] = i;
  return {{"id", "cmpl-mock"}, {"object", "text_completion"}, {"choices", std::move(choices)}};
}

struct MockServer::Impl {
  httplib::Server server;
};

MockServer::MockServer(Handler handler) : impl_(std::make_unique<Impl>()), handler_(std::move(handler)) {
  impl_->server.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
    const std::size_t now = ++in_flight_;
    std::size_t seen = high_water_.load();
    while (now > seen && !high_water_.compare_exchange_weak(seen, now)) {
    }
    const std::size_t index = calls_.fetch_add(1);
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      --in_flight_;
      res.status = 400;
      res.set_content(R"({"error":"bad json"})", "application/json");
      return;
    }
    {
      std::lock_guard lock(mu_);
      requests_.push_back(body);
    }
    Reply reply;
    try {
      reply = handler_(body, index);
    } catch (const std::exception& e) {
      reply.status = 500;
      reply.body = {{"error", e.what()}};
    }
    if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
    --in_flight_;
  });
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("mock server could not bind");
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

MockServer::~MockServer() { stop(); }

void MockServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

std::vector<json> MockServer::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

namespace {

std::string verdict_text(char choice) {
  return std::string("<think>oracle</think>\\boxed{") + choice + "}";
}

}  // namespace

Handler oracle_judge(std::vector<std::pair<std::string, std::string>> pairs, bool invert) {
  return [pairs = std::move(pairs), invert](const json& req, std::size_t) -> Reply {
    const std::string prompt = req.at("prompt").get<std::string>();
    for (const auto& [chosen, rejected] : pairs) {
      const auto pc = prompt.find(chosen);
      const auto pr = prompt.find(rejected);
      if (pc == std::string::npos || pr == std::string::npos) continue;
      const bool chosen_first = pc < pr;
      const char pick = (chosen_first != invert) ? 'A' : 'B';
      const int n = req.value("n", 1);
      std::vector<json> choices(static_cast<std::size_t>(n), make_choice(verdict_text(pick)));
      return {200, make_response(std::move(choices))};
    }
    return {404, {{"error", "prompt matches no scripted pair"}}};
  };
}

Handler scripted(const json& script) {
  return [script](const json& req, std::size_t) -> Reply {
    const std::string model = req.value("model", "");
    const std::string prompt = req.at("prompt").get<std::string>();
    const int n = req.value("n", 1);

    if (script.contains("oracle") && script["oracle"].contains(model)) {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& p : script["oracle"][model])
        pairs.emplace_back(p.at("chosen").get<std::string>(), p.at("rejected").get<std::string>());
      return oracle_judge(std::move(pairs))(req, 0);
    }
    if (!script.contains("models") || !script["models"].contains(model))
      return {404, {{"error", "unknown model " + model}}};
    const json& table = script["models"][model];
    const json* best = nullptr;
    std::size_t best_len = 0;
    for (auto it = table.begin(); it != table.end(); ++it) {
      if (it.key().size() > best_len && prompt.find(it.key()) != std::string::npos) {
        best = &it.value();
        best_len = it.key().size();
      }
    }
    if (best == nullptr || best->empty())
      return {404, {{"error", "prompt matches no scripted example"}}};
    std::vector<json> choices;
    for (int i = 0; i < n; ++i) {
      const json& c = (*best)[static_cast<std::size_t>(i) % best->size()];
      choices.push_back(make_choice(c.at("text").get<std::string>(),
                                    c.at("tokens").get<std::vector<std::string>>(),
                                    c.at("token_logprobs").get<std::vector<double>>()));
    }
    return {200, make_response(std::move(choices))};
  };
}

Handler scripted_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read mock script " + path.string());
  return scripted(json::parse(in));
}

Handler failing_first(std::size_t failures, int status, Handler next) {
  auto count = std::make_shared<std::atomic<std::size_t>>(0);
  return [=](const json& req, std::size_t index) -> Reply {
    if (count->fetch_add(1) < failures) return {status, {{"error", "scripted failure"}}};
    return next(req, index);
  };
}

}  // namespace grmcurate::mock
