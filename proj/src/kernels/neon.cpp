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

#include <arm_neon.h>

#include "grmcurate/kernels/kernels.hpp"

namespace grmcurate::kernels {
namespace {

// Two float64x2 registers stand in for the four logical lanes:
// lo = {lane0, lane1}, hi = {lane2, lane3}.
double horizontal(float64x2_t lo, float64x2_t hi) {
  return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
         (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    lo = vaddq_f64(lo, vld1q_f64(x + i));
    hi = vaddq_f64(hi, vld1q_f64(x + i + 2));
  }
  double total = horizontal(lo, hi);
  for (std::size_t i = blocked; i < n; ++i) total += x[i];
  return total;
}

double sum_squared_deviations_neon(const double* x, std::size_t n, double c) {
  const float64x2_t center = vdupq_n_f64(c);
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(x + i), center);
    const float64x2_t d1 = vsubq_f64(vld1q_f64(x + i + 2), center);
    // Separate multiply and add; a fused vfmaq would break parity with scalar.
    lo = vaddq_f64(lo, vmulq_f64(d0, d0));
    hi = vaddq_f64(hi, vmulq_f64(d1, d1));
  }
  double total = horizontal(lo, hi);
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = x[i] - c;
    total += d * d;
  }
  return total;
}

bool all_in_unit_interval_neon(const double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const std::size_t blocked = n - n % 2;
  for (std::size_t i = 0; i < blocked; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    const uint64x2_t ok = vandq_u64(vcgeq_f64(v, zero), vcleq_f64(v, one));
    if ((vgetq_lane_u64(ok, 0) & vgetq_lane_u64(ok, 1)) == 0) return false;
  }
  for (std::size_t i = blocked; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
  }
  return true;
}

constexpr KernelTable kNeon{Isa::Neon, &sum_neon, &sum_squared_deviations_neon,
                            &all_in_unit_interval_neon};

}  // namespace

const KernelTable* neon_table() noexcept { return &kNeon; }

}  // namespace grmcurate::kernels
