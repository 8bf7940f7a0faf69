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

// grmcurate-mock: serves a scripted completions endpoint for local dry runs.
//
//   grmcurate-mock --script tests/golden/mock_script.json
//
// Prints the base URL on stdout and serves until interrupted.

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "grmcurate_mock/mock_endpoint.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scripted OpenAI-style completions mock"};
  std::string script;
  app.add_option("--script", script, "Mock script JSON")->required()->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  grmcurate::mock::MockServer server(grmcurate::mock::scripted_from_file(script));
  std::cout << server.base_url() << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (g_stop == 0) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  std::cerr << "served " << server.calls() << " requests\n";
  return 0;
}
