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
#include <span>
#include <string_view>

// Reduction kernels behind the span means and group statistics.
//
// Every variant reduces in the same order: four interleaved partial sums over
// the largest multiple-of-four prefix (lane j takes elements i with i % 4 == j),
// combined as (lane0 + lane1) + (lane2 + lane3), followed by the tail added
// left to right. Vector variants are therefore bit-identical to the scalar
// reference, not merely close to it.
namespace grmcurate::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  double (*sum)(const double* data, std::size_t n);
  double (*sum_squared_deviations)(const double* data, std::size_t n, double center);
  bool (*all_in_unit_interval)(const double* data, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// Null when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

/// Kernels picked at first use: the best supported variant, or scalar when
/// GRMCURATE_FORCE_SCALAR is set in the environment.
const KernelTable& active() noexcept;
Isa active_isa() noexcept;

inline double sum(std::span<const double> xs) noexcept {
  return active().sum(xs.data(), xs.size());
}

inline double sum_squared_deviations(std::span<const double> xs, double center) noexcept {
  return active().sum_squared_deviations(xs.data(), xs.size(), center);
}

/// False if any element is NaN or outside [0,1]. True for an empty span.
inline bool all_in_unit_interval(std::span<const double> xs) noexcept {
  return active().all_in_unit_interval(xs.data(), xs.size());
}

}  // namespace grmcurate::kernels
