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

#include "grmcurate/kernels/kernels.hpp"

namespace grmcurate::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    lane[0] += x[i];
    lane[1] += x[i + 1];
    lane[2] += x[i + 2];
    lane[3] += x[i + 3];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = blocked; i < n; ++i) total += x[i];
  return total;
}

double sum_squared_deviations_scalar(const double* x, std::size_t n, double c) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double d = x[i + j] - c;
      lane[j] += d * d;
    }
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = x[i] - c;
    total += d * d;
  }
  return total;
}

bool all_in_unit_interval_scalar(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
  }
  return true;
}

constexpr KernelTable kScalar{Isa::Scalar, &sum_scalar, &sum_squared_deviations_scalar,
                              &all_in_unit_interval_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace grmcurate::kernels
