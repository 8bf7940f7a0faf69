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

#include "grmcurate/client/backoff.hpp"

#include <algorithm>
#include <cmath>

namespace grmcurate::client {

std::chrono::milliseconds BackoffPolicy::delay(int attempt, std::mt19937_64& rng) const {
  const double base = static_cast<double>(initial.count()) *
                      std::pow(factor, static_cast<double>(std::max(attempt, 0)));
  std::uniform_real_distribution<double> stretch(0.0, jitter);
  const double jittered = base * (1.0 + stretch(rng));
  const double capped = std::min(jittered, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

bool is_retriable_status(int status) noexcept {
  return status == 0 || status == 429 || (status >= 500 && status <= 599);
}

}  // namespace grmcurate::client
