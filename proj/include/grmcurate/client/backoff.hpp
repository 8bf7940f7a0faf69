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

#include <chrono>
#include <random>

namespace grmcurate::client {

/// Exponential backoff: initial * factor^attempt, stretched by up to
/// `jitter` (a fraction) and capped at max_delay.
struct BackoffPolicy {
  std::chrono::milliseconds initial{1000};
  double factor = 2.0;
  double jitter = 0.25;
  std::chrono::milliseconds max_delay{60'000};

  std::chrono::milliseconds delay(int attempt, std::mt19937_64& rng) const;
};

/// Transport-level failures (status 0), 429 and 5xx are worth retrying.
bool is_retriable_status(int status) noexcept;

}  // namespace grmcurate::client
